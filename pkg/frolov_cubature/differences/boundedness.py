from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from frolov_cubature.differences.operators import MIN_QUAD_POINTS
from frolov_cubature.differences.seminorms import BESOV, SmoothnessParams, seminorm
from frolov_cubature.transforms.periodization import PeriodizerKernel, apply_multiplier
from frolov_cubature.utils import unit_box


DEGENERATE_SEMINORM = 1e-14


class DegenerateSeminormError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChangeOfVariableOperator:
    """T f(x) = prod_i psi'(x_i) f(psi(x)), supported in [0, 1]^d."""

    kernel: Any

    def __call__(self, f: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
        kernel = self.kernel

        def transformed(x: np.ndarray) -> np.ndarray:
            return np.prod(kernel.density(x), axis=-1) * f(kernel.value(x))

        return transformed


@dataclass(frozen=True, eq=False)
class MultiplierOperator:
    """T~ f(x) = psi(x) f(x) for 1-periodic f, supported in the periodizer box."""

    kernel: PeriodizerKernel

    def __call__(self, f: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
        kernel = self.kernel
        return lambda x: apply_multiplier(kernel, f, x)


def boundedness_ratio(
    op,
    f: Callable[[np.ndarray], np.ndarray],
    params: SmoothnessParams,
    d: int,
    j_max: int,
    lp_grid: int,
    scale: str = BESOV,
    quad_points: int = MIN_QUAD_POINTS,
    support=None,
    use_tqdm: bool = False,
) -> float:
    """seminorm(op(f)) / seminorm(f) on a common truncation and grid.

    For the change of variable, `support` is the box outside which f vanishes (default
    [0, 1]^d). For the multiplier, f is treated as 1-periodic."""
    grids = dict(j_max=j_max, lp_grid=lp_grid, quad_points=quad_points, use_tqdm=use_tqdm)

    if isinstance(op, MultiplierOperator):
        denominator = seminorm(f, params, d, scale=scale, periodic=True, **grids)
        numerator_support = op.kernel.support_box
    elif isinstance(op, ChangeOfVariableOperator):
        denominator = seminorm(f, params, d, scale=scale, support=support, **grids)
        numerator_support = unit_box(d)
    else:
        raise ValueError(f"Unsupported operator {type(op)}.")

    if denominator.value <= DEGENERATE_SEMINORM:
        raise DegenerateSeminormError(
            f"Seminorm of the input is {denominator.value:.3e}; the ratio is undefined."
        )

    numerator = seminorm(op(f), params, d, scale=scale, support=numerator_support, **grids)
    return numerator.value / denominator.value
