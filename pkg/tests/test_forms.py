import pytest

from telescoper.dfinite import df_rational
from telescoper.field import parse_expression
from telescoper.forms import DifferentialForm, d, d_s, dx, op_apply_form, split_top, wedge, wedge_dx
from telescoper.ore import OreOperator, WeylOperator


def rf(text, n=2):
    return parse_expression(text, n)


def form(n, degree, coeffs):
    return DifferentialForm.from_rational(n, degree, {k: parse_expression(v, n) for k, v in coeffs.items()})


def test_wedge_basics():
    assert wedge(dx(2, 1), dx(2, 1)).is_zero()
    assert wedge(dx(2, 2), dx(2, 1)) == -dx(2, 1, 2)
    a = form(2, 1, {(1,): "x1"})
    b = form(2, 1, {(2,): "x2"})
    assert wedge(a, b) == form(2, 2, {(1, 2): "x1*x2"})


def test_d_examples():
    omega = form(2, 1, {(2,): "x2"})
    assert d_s(omega, 0).is_zero()
    assert d_s(omega, 1).is_zero()
    assert d(form(2, 0, {(): "x1*x2"})) == form(2, 1, {(1,): "x2", (2,): "x1"})


def test_quintic_form_is_closed():
    n = 5
    W = parse_expression("(x1^5+x2^5+x3^5+x4^5+x5^5)/5 - t*x1*x2*x3*x4*x5", n)
    terms = {}
    for i in range(1, 6):
        idx = tuple(j for j in range(1, 6) if j != i)
        terms[idx] = (-1) ** (i - 1) * parse_expression(f"x{i}", n) / W
    omega = DifferentialForm.from_rational(n, 4, terms)
    assert d_s(omega, 5).is_zero()
    assert not d_s(omega, 4).is_zero()


def test_apply_operator():
    omega = DifferentialForm.from_rational(1, 1, {(1,): rf("1/(x1*t+1)", 1)})
    res = op_apply_form(OreOperator.parse("Dt", 1), omega)
    assert res == DifferentialForm.from_rational(1, 1, {(1,): rf("-x1/(x1*t+1)^2", 1)})
    assert op_apply_form(WeylOperator.one(1), omega) == omega


@pytest.mark.parametrize(
    "coeffs,degree,l,u,v",
    [
        ({(1,): "t"}, 1, 1, {(): "t"}, {}),
        ({(1, 2): "t"}, 2, 2, {(1,): "t"}, {}),
        ({(1,): "x1", (2,): "x2"}, 1, 2, {(): "x2"}, {(1,): "x1"}),
    ],
)
def test_split_top(coeffs, degree, l, u, v):
    omega = form(2, degree, coeffs)
    uu, vv = split_top(omega, l)
    assert uu == form(2, degree - 1, u)
    assert vv == form(2, degree, v)
    assert wedge_dx(uu, l) + vv == omega


def test_degree_bounds():
    with pytest.raises(ValueError):
        DifferentialForm(2, 3, {(1, 2, 3): df_rational(rf("1"))})
    assert DifferentialForm(2, 4).is_zero()
    with pytest.raises(ValueError):
        DifferentialForm(2, 1, {(2, 1): df_rational(rf("1"))})
