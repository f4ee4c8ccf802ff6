"""Configurations, line enumeration, incidence spectra, and bound checks.

A configuration is a finite list of distinct projective points, optionally
carrying an exact index-level collinearity oracle (attached by the family
generators).  Line enumeration has three interchangeable paths: canonical
integer keys for rational configurations, oracle index rules, and certified
direction grouping for symbolic coordinates.  Every spectrum is validated
against the pair double-count identity on construction.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional, Protocol, Sequence

from .certsort import direction_groups
from .errors import DuplicatePoint, FieldEscapeWarning
from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION
from .projective import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    equivalent,
    join,
    nonzero_coord_index,
)
from .scalars import AdaptiveReal, scalar_float, s_mul, s_sub


class LineOracle(Protocol):
    """Exact symbolic collinearity rule over point indices."""

    def line_members(self, i: int, j: int) -> frozenset[int]:
        """All indices on the line through points i and j (including both)."""
        ...


@dataclass(frozen=True)
class Configuration:
    points: tuple[ProjPoint, ...]
    oracle: Optional[LineOracle] = None
    meta: Mapping = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_rational(self) -> bool:
        return all(p.is_rational for p in self.points)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return len(self) == len(other) and all(
            a == b for a, b in zip(self.points, other.points)
        )

    def __hash__(self):
        return hash(len(self.points))


def make_configuration(
    points: Sequence[ProjPoint],
    oracle: Optional[LineOracle] = None,
    meta: Mapping | None = None,
    check_distinct: bool = True,
) -> Configuration:
    points = tuple(points)
    if check_distinct:
        _check_distinct(points)
    return Configuration(points, oracle, dict(meta or {}))


def _float_key(p: ProjPoint) -> tuple[float, float, float]:
    vals = [scalar_float(c) for c in p.coords]
    scale = max(abs(v) for v in vals)
    if not math.isfinite(scale) or scale == 0:
        return (0.0, 0.0, 0.0)  # degenerate key; certified check decides
    vals = [v / scale for v in vals]
    for v in vals:
        if abs(v) > 1e-9:
            if v < 0:
                vals = [-w for w in vals]
            break
    return tuple(vals)


def _check_distinct(points: tuple[ProjPoint, ...]):
    seen: dict[tuple[int, int, int], int] = {}
    symbolic: list[int] = []
    for idx, p in enumerate(points):
        if p.ikey is not None:
            if p.ikey in seen:
                raise DuplicatePoint(f"points {seen[p.ikey]} and {idx} coincide")
            seen[p.ikey] = idx
        else:
            symbolic.append(idx)
    if not symbolic:
        return
    # float prescreen among all points, certified confirmation on collisions
    keyed = sorted(range(len(points)), key=lambda i: _float_key(points[i]))
    for a, b in zip(keyed, keyed[1:]):
        ka, kb = _float_key(points[a]), _float_key(points[b])
        if all(abs(x - y) < 1e-9 for x, y in zip(ka, kb)):
            if equivalent(points[a], points[b]):
                raise DuplicatePoint(f"points {a} and {b} coincide")


# -- line tables ---------------------------------------------------------------


@dataclass(frozen=True)
class LineRecord:
    members: tuple[int, ...]
    line: Optional[ProjLine]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class LineTable:
    n: int
    records: tuple[LineRecord, ...]

    def __post_init__(self):
        pair_total = sum(math.comb(r.size, 2) for r in self.records)
        if pair_total != math.comb(self.n, 2):
            raise AssertionError(
                f"line table covers {pair_total} pairs, expected C({self.n},2)"
            )
        per_point = [0] * self.n
        for r in self.records:
            for i in r.members:
                per_point[i] += r.size - 1
        if any(v != self.n - 1 for v in per_point):
            raise AssertionError("line table is not a partition of point pairs")

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            out[r.size] = out.get(r.size, 0) + 1
        return out

    def line_for(self, points: Sequence[ProjPoint], rec: LineRecord) -> ProjLine:
        if rec.line is not None:
            return rec.line
        i, j = rec.members[0], rec.members[1]
        return join(points[i], points[j])


def enumerate_lines(
    config: Configuration,
    method: str = "auto",
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> LineTable:
    """Partition all point pairs into maximal collinear groups."""
    n = len(config)
    if n < 2:
        raise ValueError("need at least two points")
    if method == "auto":
        if config.is_rational:
            method = "rational"
        elif config.oracle is not None:
            method = "oracle"
        else:
            method = "certified"
    if method == "rational":
        return _lines_rational(config)
    if method == "oracle":
        if config.oracle is None:
            raise ValueError("configuration has no oracle attached")
        return _lines_oracle(config)
    if method == "certified":
        return _lines_certified(config, start_prec, cap)
    raise ValueError(f"unknown line enumeration method {method!r}")


def _lines_rational(config: Configuration) -> LineTable:
    pts = config.points
    keys = [p.ikey for p in pts]
    if any(k is None for k in keys):
        # mixed configurations fall back to the certified path
        return _lines_certified(config, DEFAULT_START_PRECISION, DEFAULT_PRECISION_CAP)
    groups: dict[tuple[int, int, int], set[int]] = {}
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            ln = join(pts[i], pts[j])
            groups.setdefault(ln.ikey, set()).add(i)
            groups[ln.ikey].add(j)
    records = [
        LineRecord(tuple(sorted(m)), ProjLine(k)) for k, m in sorted(groups.items())
    ]
    return LineTable(n, tuple(records))


def _lines_oracle(config: Configuration) -> LineTable:
    n = len(config)
    orc = config.oracle
    seen: set[frozenset[int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            seen.add(orc.line_members(i, j))
    records = [LineRecord(tuple(sorted(m)), None) for m in sorted(seen, key=sorted)]
    return LineTable(n, tuple(records))


def _lines_certified(config: Configuration, start_prec: int, cap: int) -> LineTable:
    pts = config.points
    n = len(pts)
    line_sets: set[frozenset[int]] = set()
    for i in range(n):
        p = pts[i]
        t = nonzero_coord_index(p)
        u, v = [k for k in range(3) if k != t]
        others = [j for j in range(n) if j != i]
        pairs = []
        for j in others:
            q = pts[j]
            # components u, v of p x q parametrize the pencil of lines at p
            a = _cross_component(p, q, u)
            b = _cross_component(p, q, v)
            pairs.append((a, b))
        groups = direction_groups(pairs, mod_pi=True, start_prec=start_prec, cap=cap)
        for g in groups:
            line_sets.add(frozenset(others[k] for k in g) | {i})
    records = [LineRecord(tuple(sorted(m)), None) for m in sorted(line_sets, key=sorted)]
    return LineTable(n, tuple(records))


_CROSS_IDX = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


def _cross_component(p: ProjPoint, q: ProjPoint, comp: int):
    i, j = _CROSS_IDX[comp]
    return s_sub(s_mul(p.coords[i], q.coords[j]), s_mul(p.coords[j], q.coords[i]))


# -- spectra -------------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceSpectrum:
    """N_k counts for a configuration of n points; the pair double count
    sum_k C(k,2) N_k == C(n,2) is enforced on construction."""

    n: int
    counts: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(
            self, "counts", {k: v for k, v in sorted(self.counts.items()) if v}
        )
        for k, v in self.counts.items():
            if k < 2 or v < 0 or k > self.n:
                raise AssertionError(f"invalid spectrum entry N_{k} = {v}")
        lhs = sum(math.comb(k, 2) * v for k, v in self.counts.items())
        if lhs != math.comb(self.n, 2):
            raise AssertionError(
                f"double-count identity fails: {lhs} != C({self.n},2)"
            )

    def __getitem__(self, k: int) -> int:
        return self.counts.get(k, 0)

    @property
    def ordinary(self) -> int:
        return self[2]

    @property
    def three_rich(self) -> int:
        return self[3]

    @property
    def line_count(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {"n": self.n, "N": {str(k): v for k, v in self.counts.items()}}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["k", "N_k"])
        for k, v in self.counts.items():
            w.writerow([k, v])
        return buf.getvalue()


def spectrum(
    config: Configuration,
    method: str = "auto",
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> IncidenceSpectrum:
    table = enumerate_lines(config, method, start_prec, cap)
    return IncidenceSpectrum(len(config), table.counts())


# -- identity and bound reports -------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    n: int
    lhs: int
    rhs: int

    @property
    def residual(self) -> int:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.residual == 0

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pair_sum": self.lhs,
            "pairs": self.rhs,
            "residual": self.residual,
            "passed": self.passed,
        }


def check_identities(n: int, counts: Mapping[int, int] | IncidenceSpectrum) -> IdentityReport:
    """Verify sum_k C(k,2) N_k == C(n,2) for possibly unvalidated counts."""
    if isinstance(counts, IncidenceSpectrum):
        counts = counts.counts
    lhs = sum(math.comb(k, 2) * v for k, v in counts.items())
    return IdentityReport(n, lhs, math.comb(n, 2))


def dirac_motzkin_minimum(n: int) -> int:
    """The sharp lower bound for ordinary lines: m, 3m, 3m-3 according to
    n = 2m, 4m+1, 4m-1."""
    if n % 2 == 0:
        return n // 2
    if n % 4 == 1:
        return 3 * ((n - 1) // 4)
    return 3 * ((n + 1) // 4) - 3


def orchard_maximum(n: int) -> int:
    """The sharp upper bound for 3-rich lines: floor(n(n-3)/6) + 1."""
    return (n * (n - 3)) // 6 + 1


@dataclass(frozen=True)
class BoundsReport:
    n: int
    status: str  # "checked" | "skipped-small" | "collinear-vacuous"
    ordinary: int | None = None
    three_rich: int | None = None
    ordinary_minimum: int | None = None
    three_rich_maximum: int | None = None

    @property
    def ordinary_slack(self) -> int | None:
        if self.status != "checked":
            return None
        return self.ordinary - self.ordinary_minimum

    @property
    def three_rich_slack(self) -> int | None:
        if self.status != "checked":
            return None
        return self.three_rich_maximum - self.three_rich

    @property
    def small_n_exception(self) -> bool:
        return self.status == "checked" and (
            self.ordinary_slack < 0 or self.three_rich_slack < 0
        )

    def to_json_dict(self) -> dict:
        out = {"n": self.n, "status": self.status}
        if self.status == "checked":
            out.update(
                {
                    "ordinary": self.ordinary,
                    "ordinary_minimum": self.ordinary_minimum,
                    "ordinary_slack": self.ordinary_slack,
                    "three_rich": self.three_rich,
                    "three_rich_maximum": self.three_rich_maximum,
                    "three_rich_slack": self.three_rich_slack,
                    "small_n_exception": self.small_n_exception,
                }
            )
        return out


def check_extremal_bounds(s: IncidenceSpectrum) -> BoundsReport:
    if s.n < 3:
        return BoundsReport(s.n, "skipped-small")
    if s[s.n] == 1:
        return BoundsReport(s.n, "collinear-vacuous")
    return BoundsReport(
        s.n,
        "checked",
        ordinary=s.ordinary,
        three_rich=s.three_rich,
        ordinary_minimum=dirac_motzkin_minimum(s.n),
        three_rich_maximum=orchard_maximum(s.n),
    )


# -- transforms on configurations -----------------------------------------------


def apply_transform(t: ProjTransform, config: Configuration) -> Configuration:
    """Map every point; the incidence spectrum is projectively invariant.

    If a symbolic configuration is pushed outside its certified field (a
    transform entry is a bare adaptive real with no algebraic metadata) the
    result is flagged and a FieldEscapeWarning is emitted.
    """
    escapes = any(
        isinstance(x, AdaptiveReal) and x.meta is None for row in t.rows for x in row
    )
    symbolic = not config.is_rational
    new_points = [t.apply_point(p) for p in config.points]
    meta = dict(config.meta)
    if escapes and symbolic:
        warnings.warn(
            "transform leaves the symbolic field; certification downgraded",
            FieldEscapeWarning,
        )
        meta["field_escape"] = True
    return Configuration(tuple(new_points), config.oracle, meta)
