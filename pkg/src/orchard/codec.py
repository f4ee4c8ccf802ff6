"""Lossless JSON documents for configurations.

Schema (format_version 1):

    {"format_version": "1",
     "field": "rational" | "trig",
     "points": [ {"xyz": [SCALAR, SCALAR, SCALAR]}
               | {"circle_turns": "j/m"}      # [cos 2pi t, sin 2pi t, 1]
               | {"infinity_turns": "k/m"}    # [-sin pi t, cos pi t, 0]
               | {"acnodal_turns": "a/b"}     # smooth point of y^2=x^2(x-1)
               , ...],
     "meta": {...}}

    SCALAR = "p/q"
           | {"trig": [FN, "a/b"]}                      # FN(pi * a/b)
           | {"cyclotomic": {"order": N, "coeffs": ["p/q", ...]}}

Documents carry bit-exact rational strings, never floats.  Raw adaptive
reals without a cyclotomic handle have no lossless form and are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .cyclotomic import CycField, CycNum
from .errors import ParseError
from .families import acnodal_point, circle_point, infinity_point
from .incidence import Configuration, make_configuration
from .projective import ProjPoint
from .scalars import AdaptiveReal, TrigScalar, scalar_repr_data

FORMAT_VERSION = "1"


def _encode_scalar(s):
    tag = scalar_repr_data(s)
    if tag[0] == "rational":
        return str(tag[1])
    if tag[0] == "trig":
        return {"trig": [tag[1], str(tag[2])]}
    cyc: CycNum = tag[1]
    return {
        "cyclotomic": {
            "order": cyc.field.order,
            "coeffs": [str(c) for c in cyc.vec],
        }
    }


def _decode_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational literal {text!r}: {e}") from None


def _decode_scalar(obj):
    if isinstance(obj, str):
        return _decode_fraction(obj)
    if isinstance(obj, dict) and "trig" in obj:
        fn, turns = obj["trig"]
        return TrigScalar(fn, _decode_fraction(turns))
    if isinstance(obj, dict) and "cyclotomic" in obj:
        spec = obj["cyclotomic"]
        field = CycField(int(spec["order"]))
        coeffs = [_decode_fraction(c) for c in spec["coeffs"]]
        if len(coeffs) != field.phi:
            raise ParseError(
                f"cyclotomic vector needs {field.phi} coefficients for order {field.order}"
            )
        cyc = CycNum(field, tuple(coeffs))
        return AdaptiveReal(
            cyc.interval, cyc.alg_meta(), lambda c=cyc: c, label=f"cyc{field.order}"
        )
    raise ParseError(f"unrecognized scalar form {obj!r}")


def _encode_point(p: ProjPoint) -> dict:
    return {"xyz": [_encode_scalar(c) for c in p.coords]}


def _decode_point(obj) -> ProjPoint:
    if not isinstance(obj, dict):
        raise ParseError(f"point entry must be an object, got {obj!r}")
    if "xyz" in obj:
        coords = obj["xyz"]
        if len(coords) != 3:
            raise ParseError("xyz needs three coordinates")
        return ProjPoint([_decode_scalar(c) for c in coords])
    if "circle_turns" in obj:
        return circle_point(_decode_fraction(obj["circle_turns"]))
    if "infinity_turns" in obj:
        return infinity_point(_decode_fraction(obj["infinity_turns"]))
    if "acnodal_turns" in obj:
        return acnodal_point(_decode_fraction(obj["acnodal_turns"]))
    raise ParseError(f"unrecognized point form: keys {sorted(obj)}")


def configuration_to_dict(config: Configuration) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "field": "rational" if config.is_rational else "trig",
        "points": [_encode_point(p) for p in config.points],
        "meta": dict(config.meta),
    }


def configuration_from_dict(doc: dict, check_distinct: bool = True) -> Configuration:
    if not isinstance(doc, dict) or "points" not in doc:
        raise ParseError("document must be an object with a 'points' array")
    points = [_decode_point(p) for p in doc["points"]]
    meta = doc.get("meta", {})
    return make_configuration(points, None, meta, check_distinct=check_distinct)


def save_configuration(config: Configuration, path) -> None:
    doc = configuration_to_dict(config)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_configuration(path) -> Configuration:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, col=e.colno) from None
    return configuration_from_dict(doc)
