"""Batch front door: generate configurations, run counts and audits, and
emit machine-readable reports.

Every run resolves a manifest (subcommand, inputs, family spec, precision
settings, seed, thread count) either from flags or from a JSON manifest
file; the manifest and a format version are embedded in every report, and
identical manifests produce byte-identical reports.  Exit codes: 0 success,
1 usage error, 2 assertion failure (nonzero identity residual or violated
bound), 3 undecidable sign at the precision cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arrangement import melchior_audit
from .chords import ngon_chord_multiplicity
from .codec import configuration_to_dict, load_configuration, save_configuration
from .errors import AmbiguousSign, OrchardError
from .families import FAMILIES, FamilySpec, generate
from .groups import FiniteAbelianGroup
from .incidence import check_extremal_bounds, check_identities, spectrum
from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION
from .scalars import scalar_float
from .structure import cover_by_cubics, grid_from_cuspidal, verify_triangular_grid
from .sumsets import almost_group_recover, sumset_bound_check

REPORT_FORMAT_VERSION = "1"
PRECISION_CAP_ENV = "ORCHARD_PRECISION_CAP"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_cap() -> int:
    v = os.environ.get(PRECISION_CAP_ENV)
    return int(v) if v else DEFAULT_PRECISION_CAP


def build_parser() -> _Parser:
    p = _Parser(prog="orchard", description=__doc__)
    p.add_argument("--version", action="version", version=f"orchard {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--manifest", help="JSON manifest file overriding flags")
        sp.add_argument("-o", "--output", help="report path (default stdout)")
        sp.add_argument(
            "--prec-start", type=int, default=DEFAULT_START_PRECISION,
            help="starting interval precision in bits",
        )
        sp.add_argument(
            "--prec-cap", type=int, default=_env_cap(),
            help=f"precision cap in bits (env {PRECISION_CAP_ENV})",
        )
        sp.add_argument("--threads", type=int, default=1,
                        help="recorded in the manifest; execution is deterministic")

    def family_args(sp, required=False):
        sp.add_argument("--family", choices=FAMILIES, required=required)
        sp.add_argument("--size", "--m", "--n", dest="size", type=int, default=0)
        sp.add_argument("--shift", help="coset shift as a rational, e.g. 1/24")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--box", type=int, default=15)

    sp = sub.add_parser("gen", help="generate a configuration document")
    common(sp)
    family_args(sp, required=True)
    sp.add_argument("--dump-coords", help="write a float coordinate CSV")

    for name, hlp in (
        ("count", "spectrum, identity and bound report"),
        ("audit", "Euler/Melchior/bad-edge arrangement report"),
        ("cover", "cubic cover report"),
    ):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        sp.add_argument("-i", "--input", help="configuration JSON")
        family_args(sp)
        if name == "count":
            sp.add_argument(
                "--method", default="auto",
                choices=("auto", "rational", "oracle", "certified"),
            )
            sp.add_argument("--dump-coords", help="write a float coordinate CSV")
            sp.add_argument("--csv", help="write the spectrum as CSV")
        if name == "audit":
            sp.add_argument("--dump-edges", help="write edge classification CSV")
            sp.add_argument("--force", action="store_true",
                            help="bypass the arrangement size guard")

    sp = sub.add_parser("grid-verify", help="triangular-grid axiom check")
    common(sp)
    sp.add_argument("--i-range", default="-2:2", help="inclusive a:b")
    sp.add_argument("--j-range", default="-10:-1")
    sp.add_argument("--k-range", default="1:10")
    sp.add_argument("--plain", action="store_true",
                    help="zero offsets (requires disjoint ranges)")

    sp = sub.add_parser("chords", help="n-gon chord multiplicity experiment")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--region", default="all", choices=("all", "interior", "exterior"))
    sp.add_argument("--csv", help="write the histogram as CSV")

    sp = sub.add_parser("sumset-check", help="restricted sumset bound check")
    common(sp)
    sp.add_argument("--u", help="comma-separated rationals")
    sp.add_argument("--v", help="comma-separated rationals")
    sp.add_argument("--mode", default="additive",
                    choices=("additive", "multiplicative"))
    sp.add_argument("--drop", type=int, default=0,
                    help="randomly drop this many pairs (uses --seed)")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("almost-group", help="coset recovery over a finite group")
    common(sp)
    sp.add_argument("-i", "--input", required=True,
                    help='JSON {"factors": [...], "A": [[..]], "B": .., "C": .., "K": int}')
    return p


def _resolve_manifest(args) -> dict:
    data = vars(args).copy()
    manifest_path = data.pop("manifest", None)
    if manifest_path:
        overrides = json.loads(Path(manifest_path).read_text())
        for k, v in overrides.items():
            data[k.replace("-", "_")] = v
    data.pop("output", None)
    return {k: v for k, v in sorted(data.items()) if v is not None}


def _config_from_args(args, manifest):
    if getattr(args, "input", None):
        return load_configuration(args.input)
    if not manifest.get("family"):
        raise UsageError("need --input or --family")
    shift = manifest.get("shift")
    spec = FamilySpec(
        manifest["family"],
        int(manifest.get("size", 0)),
        Fraction(shift) if shift else None,
        manifest.get("seed"),
        int(manifest.get("box", 15)),
    )
    return generate(spec)


def _emit(report: dict, manifest: dict, output) -> None:
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "manifest": manifest,
        "report": report,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_coords(config, path):
    rows = ["index,x,y,z"]
    for i, p in enumerate(config.points):
        vals = [scalar_float(c) for c in p.coords]
        rows.append(f"{i},{vals[0]!r},{vals[1]!r},{vals[2]!r}")
    Path(path).write_text("\n".join(rows) + "\n")


def _parse_range(text) -> range:
    a, b = text.split(":")
    return range(int(a), int(b) + 1)


def _cmd_gen(args, manifest) -> int:
    config = _config_from_args(args, manifest)
    doc = configuration_to_dict(config)
    if args.output:
        save_configuration(config, args.output)
    else:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if getattr(args, "dump_coords", None):
        _dump_coords(config, args.dump_coords)
    return 0


def _cmd_count(args, manifest) -> int:
    config = _config_from_args(args, manifest)
    s = spectrum(config, manifest.get("method", "auto"),
                 args.prec_start, args.prec_cap)
    ident = check_identities(s.n, s)
    bounds = check_extremal_bounds(s)
    report = {
        "spectrum": s.to_json_dict(),
        "identity": ident.to_json_dict(),
        "bounds": bounds.to_json_dict(),
    }
    if getattr(args, "csv", None):
        Path(args.csv).write_text(s.to_csv())
    if getattr(args, "dump_coords", None):
        _dump_coords(config, args.dump_coords)
    _emit(report, manifest, args.output)
    return 0 if ident.passed else 2


def _cmd_audit(args, manifest) -> int:
    config = _config_from_args(args, manifest)
    summary = melchior_audit(
        config, "auto", args.prec_start, args.prec_cap,
        force=bool(getattr(args, "force", False)), strict=False,
    )
    _emit(summary.to_json_dict(), manifest, args.output)
    if getattr(args, "dump_edges", None):
        _dump_edge_csv(config, args, Path(args.dump_edges))
    ok = (
        summary.euler_residual == 0
        and summary.melchior_residual == 0
        and summary.bad_edge_bound_ok
        and summary.spectrum.ordinary >= 3
    )
    return 0 if ok else 2


def _dump_edge_csv(config, args, path: Path):
    from .arrangement import SphericalDcel
    from .incidence import enumerate_lines

    table = enumerate_lines(config, "auto", args.prec_start, args.prec_cap)
    dcel = SphericalDcel(config, table, args.prec_start, args.prec_cap)
    flags = dcel.good_edge_flags()
    rows = ["edge,dual_point,from_line,to_line,class"]
    seen = set()
    eid = 0
    for h in range(len(dcel.he_from)):
        if h > dcel.he_twin[h]:
            continue
        key = frozenset((h, dcel.antipodal_he(h)))
        if key in seen:
            continue
        seen.add(key)
        rows.append(
            f"{eid},{dcel.he_circle[h]},{dcel.he_from[h] // 2},"
            f"{dcel.he_to[h] // 2},{'good' if flags[h] else 'bad'}"
        )
        eid += 1
    path.write_text("\n".join(rows) + "\n")


def _cmd_cover(args, manifest) -> int:
    config = _config_from_args(args, manifest)
    cover = cover_by_cubics(config, args.prec_start, args.prec_cap)
    _emit(cover.to_json_dict(), manifest, args.output)
    return 0 if (cover.complete and cover.within_budget) else 2


def _cmd_grid_verify(args, manifest) -> int:
    offsets = (
        (Fraction(0), Fraction(0), Fraction(0))
        if args.plain
        else (Fraction(0), Fraction(1, 3), Fraction(-1, 3))
    )
    grid = grid_from_cuspidal(
        _parse_range(manifest.get("i_range", "-2:2")),
        _parse_range(manifest.get("j_range", "-10:-1")),
        _parse_range(manifest.get("k_range", "1:10")),
        offsets=offsets,
    )
    rep = verify_triangular_grid(grid, args.prec_start, args.prec_cap)
    report = {
        "axiom_i": rep.axiom_i_ok,
        "axiom_ii": rep.axiom_ii_ok,
        "violations": list(rep.violations),
        "duplicate_lines": list(rep.duplicate_lines),
        "hexagon_flags": list(rep.hexagon_flags) if rep.hexagon_flags else None,
        "single_cubic": rep.single_cubic.to_json_list() if rep.single_cubic else None,
    }
    _emit(report, manifest, args.output)
    return 0 if rep.passed else 2


def _cmd_chords(args, manifest) -> int:
    rep = ngon_chord_multiplicity(
        args.n, manifest.get("region", "all"), args.prec_start, args.prec_cap
    )
    _emit(rep.to_json_dict(), manifest, args.output)
    if getattr(args, "csv", None):
        Path(args.csv).write_text(rep.to_csv())
    if rep.region == "interior" and rep.max_multiplicity > 7:
        return 2
    return 0


def _parse_set(text):
    return [Fraction(tok) for tok in text.split(",") if tok.strip()]


def _cmd_sumset_check(args, manifest) -> int:
    import random

    U = _parse_set(manifest.get("u") or "")
    V = _parse_set(manifest.get("v") or "")
    if not U or not V:
        raise UsageError("sumset-check needs --u and --v")
    pairs = [(i, j) for i in range(len(U)) for j in range(len(V))]
    drop = int(manifest.get("drop", 0))
    if drop:
        rng = random.Random(int(manifest.get("seed", 0)))
        pairs = sorted(rng.sample(pairs, len(pairs) - drop))
    rep = sumset_bound_check(U, V, pairs, manifest.get("mode", "additive"))
    _emit(rep.to_json_dict(), manifest, args.output)
    return 0 if rep.holds else 2


def _cmd_almost_group(args, manifest) -> int:
    doc = json.loads(Path(args.input).read_text())
    group = FiniteAbelianGroup(tuple(doc["factors"]))
    tup = lambda S: [tuple(e) for e in S]
    result = almost_group_recover(group, tup(doc["A"]), tup(doc["B"]), tup(doc["C"]))
    K = int(doc.get("K", 0))
    report = result.to_json_dict()
    report["K"] = K
    report["within_7K"] = result.within_7k(K)
    _emit(report, manifest, args.output)
    return 0 if result.within_7k(K) else 2


_COMMANDS = {
    "gen": _cmd_gen,
    "count": _cmd_count,
    "audit": _cmd_audit,
    "cover": _cmd_cover,
    "grid-verify": _cmd_grid_verify,
    "chords": _cmd_chords,
    "sumset-check": _cmd_sumset_check,
    "almost-group": _cmd_almost_group,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        manifest = _resolve_manifest(args)
        return _COMMANDS[args.command](args, manifest)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except AmbiguousSign as e:
        print(f"ambiguous sign: {e}", file=sys.stderr)
        return 3
    except AssertionError as e:
        print(f"assertion failure: {e}", file=sys.stderr)
        return 2
    except (OrchardError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
