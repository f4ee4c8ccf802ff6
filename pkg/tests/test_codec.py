"""Configuration document round trips and error reporting."""

import json
from fractions import Fraction

import pytest

from orchard.codec import (
    configuration_from_dict,
    configuration_to_dict,
    load_configuration,
    save_configuration,
)
from orchard.errors import DuplicatePoint, ParseError, ZeroTriple
from orchard.families import FamilySpec, generate, kelly_moser
from orchard.incidence import spectrum


class TestRoundTrips:
    def test_kelly_moser(self, tmp_path):
        c = kelly_moser()
        path = tmp_path / "km.json"
        save_configuration(c, path)
        back = load_configuration(path)
        assert back == c

    def test_x12_trig(self, tmp_path):
        c = generate(FamilySpec("boroczky-base", 6))
        path = tmp_path / "x12.json"
        save_configuration(c, path)
        back = load_configuration(path)
        assert back == c
        assert spectrum(back, method="certified", start_prec=256).ordinary == 6

    def test_acnodal_cyclotomic_scalars(self, tmp_path):
        c = generate(FamilySpec("sylvester-acnodal", 7))
        path = tmp_path / "e7.json"
        save_configuration(c, path)
        back = load_configuration(path)
        assert back == c

    def test_field_tag(self):
        assert configuration_to_dict(kelly_moser())["field"] == "rational"
        assert (
            configuration_to_dict(generate(FamilySpec("boroczky-base", 5)))["field"]
            == "trig"
        )

    def test_no_floats_in_documents(self, tmp_path):
        path = tmp_path / "cfg.json"
        save_configuration(generate(FamilySpec("sylvester-acnodal", 5)), path)
        doc = json.loads(path.read_text())

        def scan(node):
            assert not isinstance(node, float), node
            if isinstance(node, dict):
                for v in node.values():
                    scan(v)
            elif isinstance(node, list):
                for v in node:
                    scan(v)

        scan(doc)


class TestPointForms:
    def test_turns_forms(self):
        doc = {
            "points": [
                {"circle_turns": "1/12"},
                {"infinity_turns": "1/12"},
                {"acnodal_turns": "1/4"},
                {"xyz": ["0", "0", "1"]},
            ],
            "meta": {},
        }
        c = configuration_from_dict(doc)
        from orchard.families import circle_point, infinity_point
        from orchard.cubics import acnodal_point
        from orchard.projective import point

        assert c.points[0] == circle_point(Fraction(1, 12))
        assert c.points[1] == infinity_point(Fraction(1, 12))
        assert c.points[2] == acnodal_point(Fraction(1, 4))
        assert c.points[3] == point(0, 0, 1)

    def test_trig_scalar_roundtrip(self):
        doc = {
            "points": [
                {"xyz": [{"trig": ["cos", "1/12"]}, {"trig": ["sin", "1/12"]}, "1"]},
                {"xyz": ["0", "0", "1"]},
            ],
            "meta": {},
        }
        c = configuration_from_dict(doc)
        back = configuration_from_dict(configuration_to_dict(c))
        assert back == c


class TestErrors:
    def test_zero_triple(self):
        with pytest.raises(ZeroTriple):
            configuration_from_dict({"points": [{"xyz": ["0", "0", "0"]}], "meta": {}})

    def test_duplicate_point(self):
        doc = {
            "points": [{"xyz": ["1", "2", "1"]}, {"xyz": ["2", "4", "2"]}],
            "meta": {},
        }
        with pytest.raises(DuplicatePoint):
            configuration_from_dict(doc)

    def test_parse_error_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"points": [\n  {"xyz": ["1" "2", "1"]}\n]}')
        with pytest.raises(ParseError) as exc:
            load_configuration(path)
        assert exc.value.line == 2

    def test_bad_rational(self):
        with pytest.raises(ParseError):
            configuration_from_dict(
                {"points": [{"xyz": ["1", "x", "1"]}], "meta": {}}
            )

    def test_unknown_point_form(self):
        with pytest.raises(ParseError):
            configuration_from_dict({"points": [{"polar": "1"}], "meta": {}})
