import pytest

from telescoper.ansatz import (
    AnsatzOptions,
    compatible_annihilator,
    eliminating_annihilator,
    elimination_search,
    normal_form_annihilator,
)
from telescoper.dfinite import DFiniteElement, block_from_strings, df_apply, df_rational, system_from_blocks
from telescoper.errors import AnsatzCeiling, PreconditionViolated
from telescoper.field import parse_expression
from telescoper.ore import WeylOperator


def rf(text, n=1):
    return parse_expression(text, n)


def exp_xt():
    blk = block_from_strings({"Dt": "Dt - x1", "Dx1": "Dx1 - t"}, 1, "exp")
    return DFiniteElement.generator(system_from_blocks([blk]))


def exp_t():
    blk = block_from_strings({"Dt": "Dt - 1", "Dx1": "Dx1"}, 1, "exp_t")
    return DFiniteElement.generator(system_from_blocks([blk]))


def is_multiple(A: WeylOperator, B: WeylOperator) -> bool:
    (key, c), *_ = A.sorted_terms()
    return A == B.scale(c / B.terms[key]) if key in B.terms else False


def test_exponential_eliminates_x():
    L = eliminating_annihilator([exp_xt()], ["t", "Dt", "Dx1"])
    assert is_multiple(L, WeylOperator.parse("Dx1 - t", 1))
    assert df_apply(L, exp_xt()).is_zero()


def test_rational_needs_all_four_generators():
    f = df_rational(rf("1/(x1*t+1)"))
    L = eliminating_annihilator([f], ["t", "x1", "Dt", "Dx1"])
    assert is_multiple(L, WeylOperator.parse("t*Dt - x1*Dx1", 1))


def test_constant_input_gives_dt():
    L = eliminating_annihilator([df_rational(rf("5"))], ["t", "x1", "Dt", "Dx1"])
    assert L == WeylOperator.parse("Dt", 1)


def test_small_generator_set_rejected():
    with pytest.raises(PreconditionViolated):
        eliminating_annihilator([exp_xt()], ["t", "Dt"])


def test_size_guard_reports_diagnostics():
    f = df_rational(rf("1/(x1^2+x2^2+t*x1*x2+1)", 2))
    with pytest.raises(AnsatzCeiling) as info:
        elimination_search([f], ["t", "Dt", "Dx1", "Dx2"], AnsatzOptions(ceiling=2))
    assert info.value.diagnostics["history"]


def test_normal_form_for_exponential():
    e = exp_xt()
    nf = normal_form_annihilator([e], [1], [], [])
    assert not nf.L.is_zero()
    assert nf.L.lies_in({"t", "Dt"})
    assert df_apply(nf.assembled(), e).is_zero()
    # the hand-derived normal form is also valid: (t Dt + 1) + Dx (-x)
    hand = WeylOperator.parse("t*Dt + 1 + Dx1*(-x1)", 1)
    assert df_apply(hand, e).is_zero()


def test_normal_form_with_J():
    f = df_rational(rf("1/(x1*t+1)"))
    nf = normal_form_annihilator([f], [], [1], [])
    assert nf.L.lies_in({"t", "Dt"})
    for j, N in nf.N.items():
        assert df_apply(nf.assembled(), f).is_zero()


def test_degenerate_zero_input():
    z = DFiniteElement.zero(exp_xt().system)
    nf = normal_form_annihilator([z], [], [], ["Dx1"])
    assert nf.L == WeylOperator.parse("Dt", 1)


def test_compatible_annihilators():
    L = compatible_annihilator([df_rational(rf("1/(t^2-1)"))], [1], [])
    assert L == WeylOperator.parse("(t^2-1)*Dt + 2*t", 1)
    assert compatible_annihilator([df_rational(rf("x1"))], [], ["x1"]) == WeylOperator.parse("Dt", 1)
    assert compatible_annihilator([exp_t()], [1], []) == WeylOperator.parse("Dt - 1", 1)


def test_compatible_rejects_dependence_on_J():
    with pytest.raises(PreconditionViolated):
        compatible_annihilator([df_rational(rf("x1*t"))], [1], [])


def test_determinism():
    f = df_rational(rf("1/(x1*t+1)"))
    a = eliminating_annihilator([f], ["t", "x1", "Dt", "Dx1"])
    b = eliminating_annihilator([f], ["t", "x1", "Dt", "Dx1"])
    assert str(a) == str(b)
