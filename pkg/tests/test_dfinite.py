import pytest

from telescoper.dfinite import (
    DFiniteElement,
    RectangularSystem,
    block_from_strings,
    df_apply,
    df_from_rational,
    df_min_annihilator_t,
    df_mul_rat,
    df_rational,
    system_from_blocks,
)
from telescoper.errors import InconsistentSystem, UnsupportedOperation
from telescoper.field import parse_expression
from telescoper.ore import OreOperator, WeylOperator

EXAMPLE_P = "Dt^2 + (((t-1)^2*x1+(t+1)^2*x2)/((t^2-1)*((t-1)*x1+(t+1)*x2)))*Dt"


def rf(text, n=1):
    return parse_expression(text, n)


def exp_xt():
    blk = block_from_strings({"Dt": "Dt - x1", "Dx1": "Dx1 - t"}, 1, "exp")
    return DFiniteElement.generator(system_from_blocks([blk]))


def test_rational_element_annihilators():
    f = df_from_rational(rf("1/(x1*t+1)"))
    assert f.system.blocks[0].ops[0] == OreOperator.parse("Dt + x1/(x1*t+1)", 1)
    g = df_from_rational(rf("t"))
    assert g.system.blocks[0].ops[0] == OreOperator.parse("Dt - 1/t", 1)
    assert g.system.blocks[0].ops[1] == OreOperator.parse("Dx1", 1, 1)


def test_apply():
    f = df_rational(rf("1/(x1*t+1)"))
    assert df_apply(OreOperator.parse("Dt", 1), f).rational_value() == rf("-x1/(x1*t+1)^2")
    assert df_apply(WeylOperator.parse("t*Dt - x1*Dx1", 1), f).is_zero()
    e = exp_xt()
    for v, blk_op in enumerate(e.system.blocks[0].ops):
        assert df_apply(blk_op, e).is_zero()


def test_min_annihilator():
    f = df_rational(rf("1/(x1*t+1)"))
    assert df_min_annihilator_t(f) == OreOperator.parse("Dt + x1/(x1*t+1)", 1)
    assert df_min_annihilator_t(df_rational(rf("x1^2+1"))) == OreOperator.parse("Dt", 1)


def test_example_block_annihilator():
    blk = block_from_strings({"Dt": EXAMPLE_P}, 2, "y")
    y = DFiniteElement.generator(system_from_blocks([blk]))
    assert df_min_annihilator_t(y) == OreOperator.parse(EXAMPLE_P, 2)
    with pytest.raises(UnsupportedOperation):
        y.derivative(1)


def test_sum_and_scaling():
    e = exp_xt()
    assert (e + DFiniteElement.zero(e.system)) == e
    assert (e + df_mul_rat(e, rf("-1"))).is_zero()


def test_inconsistent_block_rejected():
    with pytest.raises(InconsistentSystem):
        block_from_strings({"Dt": "Dt - x1", "Dx1": "Dx1 - 2*t"}, 1, "bad")


def test_direct_sum_promotion():
    e = exp_xt()
    r = df_rational(rf("1/t"))
    s = e + r
    assert s.system.dim == 2
    assert df_apply(OreOperator.parse("Dt", 1), s) == df_apply(OreOperator.parse("Dt", 1), e) + df_apply(OreOperator.parse("Dt", 1), r)
    assert RectangularSystem.trivial(1).dim == 1
