"""Map DSL parsing: grammar, composition order, caret positions, profiles."""

import pytest

from rotwidth.dynamics import (
    Compose,
    HShear,
    PiecewiseLinearProfile,
    Power,
    Translate,
    VShear,
    eval_lift,
    vnhn,
)
from rotwidth.mapdsl import DslParseError, format_caret, parse_map


class TestGrammar:
    def test_vn_hn(self):
        e = parse_map("V^3 H^3")
        assert isinstance(e, Compose)
        v, h = e.parts
        assert isinstance(v, VShear) and v.power == 3
        assert isinstance(h, HShear) and h.power == 3
        assert eval_lift(e, (0.5, 0.5)) == eval_lift(vnhn(3), (0.5, 0.5))

    def test_translation_rational_and_decimal(self):
        e = parse_map("T(1/3, 0.25)")
        assert isinstance(e, Translate)
        assert e.dx == pytest.approx(1 / 3) and e.dy == 0.25

    def test_group_power(self):
        e = parse_map("(V H)^4")
        assert isinstance(e, Power) and e.exponent == 4
        assert isinstance(e.base, Compose)

    def test_negative_shear_power(self):
        e = parse_map("V^-2")
        assert isinstance(e, VShear) and e.power == -2

    def test_juxtaposition_right_to_left(self):
        # "V H" applies H first: at (0, 1/2), H moves x by 1, then V acts at x=1
        e = parse_map("V H")
        assert eval_lift(e, (0.0, 0.5)) == (1.0, 0.5)

    def test_nested_groups(self):
        e = parse_map("(V (H V)^2)^3")
        assert isinstance(e, Power) and e.exponent == 3


class TestErrors:
    @pytest.mark.parametrize("src,pos", [
        ("V^^2", 2),
        ("T(1,", 4),
        ("(V H", 4),
        ("Q", 0),
        ("V^", 2),
        ("", 0),
        ("V ) H", 2),
    ])
    def test_positions(self, src, pos):
        with pytest.raises(DslParseError) as err:
            parse_map(src)
        assert err.value.position == pos

    def test_caret_rendering(self):
        with pytest.raises(DslParseError) as err:
            parse_map("V^^2")
        snippet = format_caret("V^^2", err.value)
        lines = snippet.splitlines()
        assert lines[0] == "V^^2"
        assert lines[1].startswith("  ^")

    def test_group_power_must_be_positive(self):
        with pytest.raises(DslParseError):
            parse_map("(V H)^0")

    def test_bad_profile_suffix(self):
        with pytest.raises(DslParseError):
            parse_map("V H @nope:file")


class TestProfileSuffix:
    def test_pl_file(self, tmp_path):
        path = tmp_path / "tent.txt"
        path.write_text("0 0\n1/2 1\n1 0\n")
        e = parse_map(f"V^2 H^2 @pl:{path}")
        v = e.parts[0]
        assert isinstance(v.profile, PiecewiseLinearProfile)
        assert v.profile(0.25) == 0.5

    def test_default_profile_is_sinsq(self):
        e = parse_map("V")
        assert e.profile.kind == "sinsq"
