import pytest

from telescoper.errors import DenominatorVanishes, ParseError
from telescoper.field import (
    RationalFunction,
    parse_expression,
    poly_ring,
    poly_split_decompose,
    rf_is_semisplit,
    rf_specialize,
)


def rf(text, n=1):
    return parse_expression(text, n)


def test_gcd_cancellation():
    assert rf("(t^2-1)/(t-1)") == rf("t+1")
    assert str(rf("(t^2-1)/(t-1)")) == "t + 1"


def test_additive_identity_and_products():
    f = rf("x1/(x1*t+1)")
    assert f + RationalFunction.zero(1) == f
    assert rf("1/(t+1)") * rf("1/(t-1)") == rf("1/(t^2-1)")


def test_denominator_is_monic():
    f = rf("1/(2*t+4)")
    assert f.den.leading_coefficient() == 1
    assert f == rf("(1/2)/(t+2)")


def test_specialize():
    f = rf("x1/(x1*t+1)")
    assert rf_specialize(f, {1: 1}) == rf("1/(t+1)")
    assert rf_specialize(f, {1: 0}).is_zero()
    with pytest.raises(DenominatorVanishes):
        rf_specialize(rf("1/x1"), {1: 0})


def test_derivative_quotient_rule():
    f = rf("1/(x1*t+1)")
    assert f.derivative(0) == rf("-x1/(x1*t+1)^2")
    assert f.derivative(1) == rf("-t/(x1*t+1)^2")


def test_split_decomposition():
    ctx = poly_ring(1)
    t, x = ctx.gens()
    dec = poly_split_decompose(x * t + 1)
    assert not dec.is_split and dec.mixed == x * t + 1
    dec = poly_split_decompose(x**2 * (t - 1))
    assert dec.x_part == x**2 and dec.t_part == t - 1 and dec.is_split
    dec = poly_split_decompose((x + 1) * (x * t + 1) ** 2)
    assert dec.x_part == x + 1 and dec.mixed == (x * t + 1) ** 2


def test_semisplit():
    assert not rf_is_semisplit(rf("1/(x1*t+1)"))
    assert rf_is_semisplit(rf("(t+x1)/(x1^2*(t-1))"))
    assert rf_is_semisplit(rf("t^3/(t^2+1)"))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        rf("t + * x1")
    assert info.value.line == 1 and info.value.column == 5
    with pytest.raises(ParseError):
        rf("1/(t-t)")
    with pytest.raises(ParseError):
        rf("tx1")


def test_round_trip_printing():
    for text in ["x1/(x1*t+1)", "-3*t^2/(t^2-1)", "(t+x1)/(x1^2*(t-1))", "1/t", "7"]:
        f = rf(text)
        assert rf(str(f)) == f
