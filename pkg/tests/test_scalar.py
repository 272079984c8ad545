from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from src.algebra.scalar import (
    QuadExt,
    conjugate,
    format_scalar,
    from_sympy,
    parse_scalar,
    promote,
    to_float,
    to_sympy,
    unify,
)
from src.errors import DivisionByZeroError, MixedVariantError, ParseError
from strategies import quad2, rationals

R2 = QuadExt.root(2)


@given(quad2(), quad2(), quad2())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(quad2(nonzero=True))
def test_inverse(x):
    assert x * (1 / x) == 1
    assert x.norm() == x * conjugate(x)


@given(quad2())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(rationals)
def test_rational_round_trip(q):
    assert parse_scalar(format_scalar(q)) == q


@given(quad2(), quad2())
def test_exact_order_matches_float(x, y):
    if x != y:
        assert (x < y) == (to_float(x) < to_float(y))


def test_parse_grammar():
    assert parse_scalar("(5-3*r2)/14") == (5 - 3 * R2) / 14
    assert parse_scalar("-5/48") == Fraction(-5, 48)
    assert parse_scalar("r2*r2") == 2
    assert isinstance(parse_scalar("r2*r2"), Fraction)
    assert parse_scalar("0.25") == 0.25


def test_format_examples():
    assert format_scalar((5 - 3 * R2) / 14) == "(5-3*r2)/14"
    assert format_scalar(R2 / 2) == "r2/2"
    assert format_scalar(-R2) == "-r2"
    assert format_scalar(Fraction(-1, 8)) == "-1/8"


@pytest.mark.parametrize("text,offset", [("1/", 2), ("(1+r2", 5), ("2x", 1), ("", 0)])
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse_scalar(text)
    assert info.value.offset == offset


def test_square_radicand_rejected():
    with pytest.raises(ParseError):
        parse_scalar("r4")


def test_mixed_variants():
    with pytest.raises(MixedVariantError):
        R2 + 0.5
    with pytest.raises(MixedVariantError):
        R2 + QuadExt.root(3)
    with pytest.raises(MixedVariantError):
        parse_scalar("0.5*r2")
    with pytest.raises(MixedVariantError):
        unify([Fraction(1, 3), 0.5])
    assert unify([Fraction(1, 3), 0.5], allow_float=True) == [1 / 3, 0.5]


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        parse_scalar("1/(r2-r2)")
    with pytest.raises(DivisionByZeroError):
        QuadExt(0, 0, 2).inverse()


def test_promotion():
    assert promote(Fraction(1, 2), "quadext") == QuadExt(Fraction(1, 2), 0, 2)
    assert promote(QuadExt(3, 0, 2), "rational") == 3
    assert promote(R2, "float") == pytest.approx(2**0.5, rel=1e-15)
    with pytest.raises(MixedVariantError):
        promote(R2, "rational")


def test_sympy_bridge():
    x = (2 - R2) / 4
    assert from_sympy(to_sympy(x), 2) == x
    assert from_sympy(sympy.Rational(3, 7)) == Fraction(3, 7)
    assert to_float(x) == pytest.approx((2 - 2**0.5) / 4, rel=1e-15)
