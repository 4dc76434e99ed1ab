from telescoper.field import RationalFunction, parse_expression, rf_is_semisplit
from telescoper.ore import OreOperator, ore_gcrd, ore_rrem
from telescoper.separability import (
    SeparabilityOptions,
    assemble_L,
    build_A_matrix,
    find_nonsingular_point,
    grid_points,
    irreducible_right_factor,
    is_separable,
    mixed_solve,
    semisplit_subspace,
    separable_completely_reducible,
)

EXAMPLE_P = "Dt^2 + (((t-1)^2*x1+(t+1)^2*x2)/((t^2-1)*((t-1)*x1+(t+1)*x2)))*Dt"


def op(text, n=1):
    return OreOperator.parse(text, n)


def rf(text, n=1):
    return parse_expression(text, n)


def assert_witness(P, verdict):
    assert verdict.status == "separable"
    L = verdict.L
    assert L.is_x_free() and L.is_monic()
    assert ore_rrem(L, P).is_zero()


def test_non_semisplit_solution_rejected():
    P = op("Dt + x1/(x1*t+1)")
    assert separable_completely_reducible(P).status == "not separable"
    assert is_separable(P).status == "not separable"


def test_example_operator_is_separable():
    P = op(EXAMPLE_P, 2)
    v = is_separable(P)
    assert_witness(P, v)
    # the hand candidate of order 2 fails the division check; the true witness has order 3
    assert not ore_rrem(op("(t^2-1)*Dt^2 + 2*t*Dt", 2), P).is_zero()
    assert v.L.order == 3


def test_x_free_operators():
    P = op("Dt - 1/t")
    v = separable_completely_reducible(P)
    assert v.L == P
    v = is_separable(op("Dt^2"))
    assert v.L == op("Dt^2")
    P = op("Dt^2 - 2*Dt + 1")
    assert_witness(P, is_separable(P))


def test_moving_pole_solution():
    P = op("Dt - 1/(t+x1)")
    assert_witness(P, is_separable(P))


def test_log_of_moving_point_rejected():
    assert is_separable(op("Dt^2 + (1/(t+x1))*Dt")).status == "not separable"


def test_bound_limited_negative_is_unknown():
    P = op("Dt - x1/t")
    assert is_separable(P).status == "unknown"
    assert is_separable(P, SeparabilityOptions(accept_bound_negatives=True)).status == "not separable"


def test_mixed_solutions_satisfy_congruence():
    P = op(EXAMPLE_P, 2)
    basis = mixed_solve(P, {1: 1, 2: 0}, bound=4)
    assert basis.P_c == op("Dt^2 + (1/(t+1))*Dt", 2)
    assert basis.solutions
    for Q in basis.solutions:
        assert ore_rrem(P * Q, basis.P_c).is_zero()


def test_semisplit_subspace_cases():
    sols = [op("x1/(t+1) + t*Dt")]
    assert semisplit_subspace(sols) == sols
    assert semisplit_subspace([op("1/(x1*t+1)")]) == []
    mixed = [op("1/(x1*t+1)"), op("1/(x1*t+1) + 1/t")]
    out = semisplit_subspace(mixed)
    assert len(out) == 1
    assert all(rf_is_semisplit(c) for c in out[0].coeffs)


def test_nonsingular_point():
    n = 1
    one, zero = RationalFunction.one(n), RationalFunction.zero(n)
    A = [[(one, zero), (zero, one)], [(zero, zero), (one, zero)]]
    a = find_nonsingular_point(A, 2, n)
    assert a[0] != 0
    assert find_nonsingular_point([[(one,)]], 1, n) == (1,)
    assert find_nonsingular_point([[(zero,)]], 1, n) is None


def test_A_matrix_for_identity():
    Pc = op("Dt^2 + (1/(t+1))*Dt")
    A = build_A_matrix([OreOperator.one(1)], Pc)
    assert find_nonsingular_point(A, 1, 1) == (1,)


def test_assemble_identity():
    Pc = op("Dt^2 + (1/(t+1))*Dt")
    assert assemble_L([RationalFunction.one(1)], Pc) == Pc


def test_right_factors():
    rf_ = irreducible_right_factor(op("Dt^2"))
    assert rf_.factor == op("Dt") and rf_.certified_irreducible
    P = op("Dt - 1") * op("Dt - t")
    assert irreducible_right_factor(P).factor == op("Dt - t")
    airy = op("Dt^2 - t")
    res = irreducible_right_factor(airy, SeparabilityOptions(riccati_bound=2, denominator_power_cap=1))
    assert res.factor == airy and not res.certified_irreducible


def test_hints_are_validated():
    P = op("Dt - 1") * op("Dt - t")
    good = irreducible_right_factor(P, SeparabilityOptions(hints=[op("Dt - t")]))
    assert good.source == "hint"
    bad = irreducible_right_factor(P, SeparabilityOptions(hints=[op("Dt - 1")]))
    assert bad.source != "hint"


def test_specialization_keeps_coprimality():
    P = op("Dt - x1/(x1*t+1)")
    L = op("Dt^2 + 1")
    Pc = P.specialize({1: 2})
    if ore_gcrd(Pc, L).order == 0:
        assert ore_gcrd(P, L).order == 0


def test_grid_order():
    pts = list(grid_points(2, 1))
    assert pts == [(0, 0), (0, 1), (1, 0), (1, 1)]
