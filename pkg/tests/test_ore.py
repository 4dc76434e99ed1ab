from math import perm

import pytest

from telescoper.ore import (
    OreOperator,
    WeylOperator,
    ore_gcrd,
    ore_lclm,
    ore_rdiv,
    ore_specialize,
    ore_transform,
    weyl_mul,
)


def op(text, n=1):
    return OreOperator.parse(text, n)


def w(text, n=1):
    return WeylOperator.parse(text, n)


def test_weyl_commutation():
    assert weyl_mul(w("Dt"), w("t")) == w("t*Dt + 1")
    assert weyl_mul(w("Dx1^2"), w("x1^3")) == w("x1^3*Dx1^2 + 6*x1^2*Dx1 + 6*x1")


@pytest.mark.parametrize("mu", range(6))
@pytest.mark.parametrize("nu", range(6))
def test_falling_factorial_terms(mu, nu):
    # derivation-free part of Dx^mu x^nu
    A = weyl_mul(w(f"Dx1^{mu}"), w(f"x1^{nu}"))
    free = A.collect_derivation(1).get(0, WeylOperator.zero(1))
    expected = w(f"x1^{nu - mu}").scale(perm(nu, mu)) if nu >= mu else WeylOperator.zero(1)
    assert free == expected
    # x^mu Dx^nu rewritten with derivations on the left
    B = weyl_mul(w(f"x1^{mu}"), w(f"Dx1^{nu}"))
    A0, _ = B.split_left_derivation(1)
    expected = w(f"x1^{mu - nu}").scale((-1) ** nu * perm(mu, nu)) if mu >= nu else WeylOperator.zero(1)
    assert A0 == expected


def test_ore_products():
    assert op("Dt + x1/(x1*t+1)") * op("Dt - x1/(x1*t+1)") == op("Dt^2")
    assert op("Dt + 1/t") * op("Dt - 1/t") == op("Dt^2")
    A = op("t*Dt^2 + x1")
    assert A * OreOperator.one(1) == A


def test_right_division():
    q, r = ore_rdiv(op("Dt^2"), op("Dt - x1/(x1*t+1)"))
    assert q == op("Dt + x1/(x1*t+1)") and r.is_zero()
    q, r = ore_rdiv(op("Dt^2"), op("Dt"))
    assert q == op("Dt") and r.is_zero()
    q, r = ore_rdiv(op("Dt"), op("t*Dt"))
    assert q == op("1/t") and r.is_zero()


def test_gcrd_lclm():
    assert ore_gcrd(op("Dt^2"), op("Dt - x1/(x1*t+1)")) == op("Dt - x1/(x1*t+1)")
    assert ore_lclm(op("Dt"), op("Dt - 1/t")) == op("Dt^2")
    A = op("2*Dt^2 + t")
    assert ore_lclm(A, A) == A.monic()


def test_transform():
    P = op("t*Dt^2 + x1*Dt + 1")
    assert ore_transform(P, OreOperator.one(1)) == P.monic()
    assert ore_transform(op("Dt - 1/t"), op("Dt")) == op("Dt")
    T = ore_transform(op("Dt - 1"), op("Dt"))
    assert T.order == 1 and T.is_monic()
    assert (T * op("Dt")).monic() == ore_lclm(op("Dt - 1"), op("Dt"))


def test_specialize_and_semisplit():
    P = op("Dt + x1/(x1*t+1)")
    assert ore_specialize(P, {1: 0}) == op("Dt")
    assert ore_specialize(P, {1: 1}) == op("Dt + 1/(t+1)")
    Q = op("Dt^2 + (((t-1)^2*x1+(t+1)^2*x2)/((t^2-1)*((t-1)*x1+(t+1)*x2)))*Dt", 2)
    assert ore_specialize(Q, {1: 1, 2: 0}) == op("Dt^2 + (1/(t+1))*Dt", 2)
    assert op("Dt^2").is_semisplit()
    assert not P.is_semisplit()
    assert op("Dt - (x1+t)").is_semisplit()


def test_printing_round_trip():
    for text in ["Dt^2 + (1/(t+1))*Dt", "Dt - (x1/(x1*t+1))", "t^2*Dt + t", "-Dt + 3"]:
        P = op(text)
        assert op(str(P)) == P
