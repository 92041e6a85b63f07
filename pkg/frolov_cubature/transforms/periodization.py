import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from frolov_cubature.kernels.psi import KernelPsiK, psi_eval
from frolov_cubature.rules.cubature import CubatureRule
from frolov_cubature.transforms.transformed_rule import PERIODIZED, TransformedRule
from frolov_cubature.utils import Box, enlarged_box, fractional_part, tensor_grid


DEFAULT_DELTA = 0.25


@dataclass(frozen=True, eq=False)
class PeriodizerKernel:
    """Tensor partition of unity psi(x) = prod_i ramp(x_i) with

        ramp(t) = psi_k((t + delta) / (2 delta))              t <= 1/2
        ramp(t) = 1 - psi_k((t - 1 + delta) / (2 delta))      t >  1/2

    so ramp rises on [-delta, delta], equals 1 on [delta, 1 - delta], falls on
    [1 - delta, 1 + delta] and ramp(t) + ramp(t - 1) = 1 on the overlap.
    """

    k: int
    delta: float = DEFAULT_DELTA
    dim: int = 1
    ramp: KernelPsiK = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"Overhang delta must be in (0, 1/2), got {self.delta}.")
        if self.dim < 1:
            raise ValueError(f"Dimension must be positive, got {self.dim}.")
        object.__setattr__(self, "ramp", KernelPsiK(self.k))

    @property
    def support_box(self) -> Box:
        return enlarged_box(self.dim, self.delta)

    def univariate(self, t, order: int = 0):
        t = np.asarray(t, dtype=float)
        scale = 1.0 / (2.0 * self.delta)
        rising = psi_eval(self.ramp, (t + self.delta) * scale, order)
        falling = psi_eval(self.ramp, (t - 1.0 + self.delta) * scale, order)
        if order == 0:
            return np.where(t <= 0.5, rising, 1.0 - falling)
        return scale**order * np.where(t <= 0.5, rising, -falling)

    def value(self, x) -> np.ndarray:
        """psi at each row of an (n, d) array (or a single point of shape (d,))."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"Expected points of dimension {self.dim}, got {x.shape[-1]}.")
        return np.prod(self.univariate(x), axis=-1)

    def __call__(self, x) -> np.ndarray:
        return self.value(x)

    def asdict(self) -> dict:
        return {"type": "periodizer", "k": self.k, "delta": self.delta, "dim": self.dim}


def build_periodizer(k: int, delta: float = DEFAULT_DELTA, d: int = 1) -> PeriodizerKernel:
    if k < 1:
        raise ValueError(f"Periodizer smoothness k must be >= 1, got {k}.")
    return PeriodizerKernel(k=k, delta=delta, dim=d)


def partition_check(kernel: PeriodizerKernel, grid_points: int) -> float:
    """max over a uniform grid on [0, 1]^d of |sum_{l in {-1, 0, 1}^d} psi(x + l) - 1|.

    `grid_points` is the number of grid points per axis."""
    if grid_points < 2:
        raise ValueError(f"Need at least 2 grid points per axis, got {grid_points}.")

    axis = np.linspace(0.0, 1.0, grid_points)
    x = tensor_grid([axis] * kernel.dim)

    total = np.zeros(len(x))
    for shift in itertools.product((-1.0, 0.0, 1.0), repeat=kernel.dim):
        total += kernel.value(x + np.array(shift))
    return float(np.abs(total - 1.0).max())


def periodize_rule(base: CubatureRule, kernel: PeriodizerKernel) -> TransformedRule:
    """Q~(f) = sum_i psi(x^i) lambda_i f({x^i}) for a base rule on the enlarged box."""
    if base.dim != kernel.dim:
        raise ValueError(f"Rule dimension {base.dim} does not match kernel dimension {kernel.dim}.")

    lo, hi = kernel.support_box
    outside = ~np.all((base.nodes >= lo) & (base.nodes <= hi), axis=1)
    outside_count = int(outside.sum())
    if outside_count:
        warnings.warn(
            f"{outside_count} base nodes lie outside the periodizer support "
            f"[{-kernel.delta}, {1 + kernel.delta}]^{kernel.dim} and get zero weight."
        )

    weights = base.weights * kernel.value(base.nodes)
    keep = weights != 0.0

    return TransformedRule(
        nodes=fractional_part(base.nodes[keep]),
        weights=weights[keep],
        label=f"periodized[{base.label}]",
        base=base,
        kind=PERIODIZED,
        kernel=kernel,
        dropped_nodes=int((~keep).sum()),
        outside_support=outside_count,
    )


def apply_multiplier(kernel: PeriodizerKernel, f: Callable[[np.ndarray], np.ndarray], x):
    """T~f(x) = psi(x) f(x), with f vectorized over rows of an (n, d) array."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    points = x[None, :] if single else x
    values = kernel.value(points) * np.asarray(f(points), dtype=float)
    return float(values[0]) if single else values
