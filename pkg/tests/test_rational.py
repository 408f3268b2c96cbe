from fractions import Fraction

import pytest

from hkmatrix.rational import approx, as_rational, format_rational, parse_rational


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-2/4", Fraction(-1, 2)), ("0", Fraction(0))])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1.5", " 1/2", "1/0", "a", "1/-2", ""])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_roundtrip():
    for x in [Fraction(0), Fraction(-7, 3), Fraction(12)]:
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(4, 2)) == "2"


def test_floats_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_approx_digits():
    assert approx(Fraction(2, 3)) == "0.666666666667"
    assert approx(0) == "0"
    assert approx(Fraction(3, 2)) == "1.5"
