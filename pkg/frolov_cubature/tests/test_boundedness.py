import numpy as np
import pytest

from frolov_cubature.config import SeminormConfig
from frolov_cubature.differences import (
    BESOV,
    TRIEBEL_LIZORKIN,
    ChangeOfVariableOperator,
    DegenerateSeminormError,
    MultiplierOperator,
    SmoothnessParams,
    boundedness_ratio,
    seminorm,
)
from frolov_cubature.harness import spline_family
from frolov_cubature.kernels import KernelPsiK, min_k_for
from frolov_cubature.transforms import build_periodizer


PARAMS = SmoothnessParams(s=2, p=2, theta=2)


with_scales = pytest.mark.parametrize("scale", [BESOV, TRIEBEL_LIZORKIN])

VARIANTS = {BESOV: "change_of_variable_B", TRIEBEL_LIZORKIN: "change_of_variable_F"}


def _max_ratio(op, family, grids: SeminormConfig, scale: str) -> float:
    ratios = [
        boundedness_ratio(op, f, PARAMS, 1, scale=scale, support=f.support, **grids.grids())
        for f in family
    ]
    print(ratios)
    return max(ratios)


def test_operators_match_their_definitions():
    kernel = KernelPsiK(3)
    op = ChangeOfVariableOperator(kernel)
    x = np.array([[0.1], [0.5], [1.2]])
    transformed = op(lambda y: np.cos(y[:, 0]))
    np.testing.assert_allclose(transformed(x), kernel.density(x[:, 0]) * np.cos(kernel.value(x[:, 0])))
    assert transformed(x)[2] == 0.0

    periodizer = build_periodizer(2, 0.25, 1)
    multiplier = MultiplierOperator(periodizer)
    np.testing.assert_allclose(multiplier(lambda y: np.ones(len(y)))(x), periodizer.value(x))


@with_scales
def test_multiplier_on_constant(scale):
    periodizer = build_periodizer(3, 0.25, 1)
    grids = SeminormConfig(dim=1, j_max=4, lp_grid=128).grids()

    ratio = boundedness_ratio(
        MultiplierOperator(periodizer), lambda x: np.ones(len(x)), PARAMS, 1, scale=scale, **grids
    )

    # the periodic constant only has a level-zero term: 2 |1| on the unit torus
    numerator = seminorm(periodizer.value, PARAMS, 1, scale=scale, support=periodizer.support_box, **grids)
    assert np.isfinite(ratio)
    assert ratio == pytest.approx(numerator.value / 2.0, rel=1e-9)


def test_scales_agree_when_p_equals_theta():
    op = ChangeOfVariableOperator(KernelPsiK(3))
    f = spline_family(1, 10)[3]
    grids = SeminormConfig(dim=1, j_max=4, lp_grid=256).grids()
    besov = boundedness_ratio(op, f, PARAMS, 1, scale=BESOV, support=f.support, **grids)
    tl = boundedness_ratio(op, f, PARAMS, 1, scale=TRIEBEL_LIZORKIN, support=f.support, **grids)
    assert tl == pytest.approx(besov, rel=1e-9)


@with_scales
def test_change_of_variable_ratio_is_stable_for_admissible_k(scale):
    k = min_k_for(PARAMS.s, PARAMS.p, VARIANTS[scale])
    assert k == 5

    op = ChangeOfVariableOperator(KernelPsiK(k))
    family = spline_family(1, 10)
    grids = SeminormConfig(dim=1, j_max=6, lp_grid=1024)

    coarse = _max_ratio(op, family, grids, scale)
    fine = _max_ratio(op, family, grids.refined(), scale)
    print(coarse, fine)
    assert np.isfinite(coarse)
    assert abs(fine - coarse) / coarse < 0.2


@with_scales
def test_change_of_variable_ratio_grows_for_small_k(scale):
    op = ChangeOfVariableOperator(KernelPsiK(1))
    # centred on the boundary, so psi' f(psi) has a kink at x = 0
    f = spline_family(1, 10)[0]
    grids = SeminormConfig(dim=1, j_max=6, lp_grid=1024)

    def ratio(config: SeminormConfig) -> float:
        return boundedness_ratio(op, f, PARAMS, 1, scale=scale, support=f.support, **config.grids())

    coarse = ratio(grids)
    one_step = ratio(grids.refined())
    fine = ratio(grids.refined(3))
    print(coarse, one_step, fine)
    # the kink term gains about sqrt(2) per level, diluted by the smooth part at coarse levels
    assert one_step > 1.15 * coarse
    assert fine > 1.5 * coarse


def test_degenerate_denominator():
    op = ChangeOfVariableOperator(KernelPsiK(3))
    with pytest.raises(DegenerateSeminormError):
        boundedness_ratio(op, lambda x: np.zeros(len(x)), PARAMS, 1, j_max=2, lp_grid=16)
    with pytest.raises(DegenerateSeminormError):
        boundedness_ratio(
            op, lambda x: np.zeros(len(x)), PARAMS, 1, scale=TRIEBEL_LIZORKIN, j_max=2, lp_grid=16
        )

    with pytest.raises(ValueError):
        boundedness_ratio(lambda f: f, np.cos, PARAMS, 1, j_max=2, lp_grid=16)
