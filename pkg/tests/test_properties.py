"""Randomized invariants; every test runs at least 200 examples."""

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from strategies import ore_operators, polynomials, rational_forms, rationals, weyl_operators, x_free_operators
from telescoper.ansatz import AnsatzOptions, eliminating_annihilator
from telescoper.dfinite import df_apply, df_rational
from telescoper.errors import AnsatzCeiling
from telescoper.field import RationalFunction, poly_ring, rf_is_semisplit
from telescoper.forms import DifferentialForm, d_s, dx, op_apply_form, wedge, wedge_dx
from telescoper.frontend import ProblemInstance, has_telescoper, verify
from telescoper.ore import (
    OreOperator,
    WeylOperator,
    ore_gcrd,
    ore_lclm,
    ore_rdiv,
    ore_rrem,
    ore_transform,
    weyl_mul,
)
from telescoper.separability import SeparabilityOptions, is_separable, mixed_solve, semisplit_subspace

MIN_CASES = settings(max_examples=200)


# ---------------------------------------------------------------------------
# operators


@MIN_CASES
@given(ore_operators(max_order=4), ore_operators(max_order=3))
def test_rdiv_contract(A, B):
    Q, R = ore_rdiv(A, B)
    assert Q * B + R == A
    assert R.is_zero() or R.order < B.order


@MIN_CASES
@given(ore_operators(max_order=2), ore_operators(max_order=2))
def test_gcrd_lclm_contract(A, B):
    G = ore_gcrd(A, B)
    L = ore_lclm(A, B)
    assert ore_rrem(A, G).is_zero() and ore_rrem(B, G).is_zero()
    assert ore_rrem(L, A).is_zero() and ore_rrem(L, B).is_zero()
    assert L.order + G.order == A.order + B.order


@MIN_CASES
@given(ore_operators(max_order=2), ore_operators(max_order=2))
def test_transform_identity(P, Q):
    T = ore_transform(P, Q)
    assert T.is_monic()
    assert (T * Q).monic() == ore_lclm(P, Q)


@MIN_CASES
@given(weyl_operators(), weyl_operators(), weyl_operators())
def test_weyl_associative_distributive(A, B, C):
    assert weyl_mul(weyl_mul(A, B), C) == weyl_mul(A, weyl_mul(B, C))
    assert weyl_mul(A, B + C) == weyl_mul(A, B) + weyl_mul(A, C)


@MIN_CASES
@given(ore_operators(max_order=2), ore_operators(max_order=2, monic=True))
def test_semisplit_product_rule(Q1, Q2):
    assume(Q2.is_semisplit())
    Q1 = Q1.monic()
    assert (Q1 * Q2).is_semisplit() == Q1.is_semisplit()


# ---------------------------------------------------------------------------
# forms


@MIN_CASES
@given(rational_forms(n=3), st.integers(min_value=0, max_value=3))
def test_d_s_squares_to_zero(omega, s):
    assert d_s(d_s(omega, s), s).is_zero()


@MIN_CASES
@given(rational_forms(n=3), st.integers(min_value=1, max_value=3))
def test_d_s_identities(u, s):
    if u.degree < 3:
        lhs = d_s(wedge_dx(u, s), s)
        rhs = wedge_dx(d_s(u, s - 1), s)
        assert lhs == rhs
    partial = op_apply_form(WeylOperator.generator(3, f"Dx{s}"), u)
    assert d_s(u, s) == d_s(u, s - 1) + wedge(dx(3, s), partial)


@MIN_CASES
@given(st.integers(min_value=0, max_value=2), st.data())
def test_operator_commutes_with_d_s(s, data):
    allowed = ["t", "Dt"] + [g for j in range(s + 1, 3) for g in (f"x{j}", f"Dx{j}")]
    L = data.draw(weyl_operators(n=2, max_terms=2, max_deg=1, allowed=allowed))
    omega = data.draw(rational_forms(n=2))
    assert op_apply_form(L, d_s(omega, s)) == d_s(op_apply_form(L, omega), s)


@MIN_CASES
@given(rational_forms(n=3, max_deg=1), rational_forms(n=3, max_deg=1))
def test_wedge_graded_commutative(a, b):
    sign = -1 if (a.degree * b.degree) % 2 else 1
    ab, ba = wedge(a, b), wedge(b, a)
    assert ab == (ba if sign > 0 else -ba)


# ---------------------------------------------------------------------------
# ansatz


GENERATOR_SETS = [["t", "x1", "Dt", "Dx1"], ["t", "Dt", "Dx1"], ["x1", "Dt", "Dx1"], ["t", "x1", "Dt"]]


@MIN_CASES
@given(rationals(n=1, max_terms=2, max_deg=1), st.sampled_from(GENERATOR_SETS))
def test_ansatz_soundness_and_support(f, S):
    elem = df_rational(f)
    try:
        L = eliminating_annihilator([elem], S, AnsatzOptions(ceiling=6))
    except AnsatzCeiling:
        assume(False)
    assert not L.is_zero()
    assert L.lies_in(S)
    assert df_apply(L, elem).is_zero()


# ---------------------------------------------------------------------------
# separability


@st.composite
def mixed_coefficients(draw):
    """Sums of a semisplit part and a multiple of a non-split fraction."""
    ctx = poly_ring(1)
    t, x = ctx.gens()
    split = draw(rationals(n=1, max_terms=2, max_deg=1))
    if not rf_is_semisplit(split):
        split = RationalFunction(split.num)
    c = draw(st.integers(min_value=-2, max_value=2))
    a = draw(st.integers(min_value=1, max_value=2))
    bad = RationalFunction(ctx.constant(c), x * t + a)
    return split + bad


@MIN_CASES
@given(st.lists(st.lists(mixed_coefficients(), min_size=1, max_size=2), min_size=1, max_size=3))
def test_semisplit_extraction(rows):
    ops = [OreOperator(r, 1) for r in rows]
    ops = [Q for Q in ops if not Q.is_zero()]
    assume(ops)
    out = semisplit_subspace(ops)
    for Q in out:
        assert all(rf_is_semisplit(c) for c in Q.coeffs)
    if len(out) >= 2:
        combo = out[0].scale_left(RationalFunction.var(1, 1)) + out[1]
        assert all(rf_is_semisplit(c) for c in combo.coeffs)


@st.composite
def order_one_operators(draw):
    """Dt - f'/f for f with small random structure; semisplit f gives a positive instance."""
    kind = draw(st.sampled_from(["split", "mixed", "random"]))
    if kind == "split":
        p = RationalFunction(draw(polynomials(n=0, max_terms=2, max_deg=2)))
        p = RationalFunction(poly_ring(1).from_dict({tuple(e) + (0,): c for e, c in p.num.terms()}))
        q = RationalFunction(draw(polynomials(n=1, max_terms=2, max_deg=2)))
        q = RationalFunction(poly_ring(1).from_dict({(0,) + tuple(e[1:]): c for e, c in q.num.terms()}))
        f = p + q
    elif kind == "mixed":
        f = draw(rationals(n=1, max_terms=2, max_deg=1))
    else:
        a = draw(rationals(n=1, max_terms=2, max_deg=1))
        return OreOperator([-a, RationalFunction.one(1)], 1)
    assume(not f.is_zero())
    return OreOperator([-(f.derivative(0) / f), RationalFunction.one(1)], 1)


FAST = SeparabilityOptions(mixed_bound=3, riccati_bound=2, denominator_power_cap=2)


@MIN_CASES
@given(order_one_operators())
def test_positive_separability_verdicts_verify(P):
    v = is_separable(P, FAST)
    if v.status == "separable":
        assert v.L.is_x_free() and v.L.is_monic()
        assert ore_rrem(v.L, P).is_zero()


@MIN_CASES
@given(order_one_operators())
def test_mixed_solutions_satisfy_congruence(P):
    basis = mixed_solve(P, {1: 1}, bound=2, denominator_power_cap=1) if _alive(P, 1) else None
    assume(basis is not None)
    for Q in basis.solutions:
        assert ore_rrem(P * Q, basis.P_c).is_zero()


def _alive(P, c):
    try:
        P.specialize({1: c})
        return True
    except Exception:
        return False


@MIN_CASES
@given(order_one_operators())
def test_bounds_monotone(P):
    small = is_separable(P, SeparabilityOptions(mixed_bound=1, riccati_bound=1, denominator_power_cap=1))
    large = is_separable(P, FAST)
    if small.status != "unknown":
        assert large.status == small.status


@MIN_CASES
@given(x_free_operators(), order_one_operators())
def test_specialization_keeps_coprimality(L, P):
    assume(L.order >= 1 and _alive(P, 1))
    if ore_gcrd(P.specialize({1: 1}), L).order == 0:
        assert ore_gcrd(P, L).order == 0


# ---------------------------------------------------------------------------
# telescopers


@MIN_CASES
@given(rationals(n=1, max_terms=2, max_deg=1), st.integers(min_value=0, max_value=1))
def test_positive_telescoper_verdicts_verify(f, degree):
    assume(not f.is_zero())
    terms = {(1,) if degree else (): df_rational(f)}
    omega = DifferentialForm(1, degree, terms)
    instance = ProblemInstance(1, omega.system, omega, FAST, AnsatzOptions(ceiling=6))
    try:
        r = has_telescoper(instance)
    except AnsatzCeiling:
        assume(False)
    if r.status == "telescoper":
        assert verify(instance, r)
