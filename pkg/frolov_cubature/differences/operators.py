from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from frolov_cubature.utils import tensor_grid


MIN_QUAD_POINTS = 4


@dataclass(frozen=True)
class DifferenceQuery:
    """One mixed difference Delta^{m,e}_h f(x). Axes in `e` are 0-based."""

    m: int
    e: Tuple[int, ...]
    h: Tuple[float, ...]
    x: Tuple[float, ...]
    j: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.j is not None and tuple(self.e) != active_axes(self.j):
            raise ValueError(f"Axes {self.e} do not match the active axes of level {self.j}.")

    @classmethod
    def from_level(cls, m: int, j: Sequence[int], x: Sequence[float]) -> "DifferenceQuery":
        j = tuple(int(ji) for ji in j)
        return cls(
            m=m,
            e=active_axes(j),
            h=tuple(2.0 ** -ji for ji in j),
            x=tuple(float(xi) for xi in x),
            j=j,
        )

    def evaluate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return mixed_difference(f, self.m, self.e, np.array(self.h), np.array(self.x))


def active_axes(j: Sequence[int]) -> Tuple[int, ...]:
    """e(j) = {i : j_i != 0}."""
    return tuple(i for i, ji in enumerate(j) if ji != 0)


def _binomial_stencil(m: int) -> np.ndarray:
    return np.array([(-1) ** (m - j) * comb(m, j) for j in range(m + 1)], dtype=float)


def univariate_difference(f: Callable, m: int, h, t):
    """Delta^m_h f(t) = sum_{j=0}^m (-1)^(m-j) C(m, j) f(t + j h)."""
    if m < 0:
        raise ValueError(f"Difference order must be >= 0, got {m}.")
    t = np.asarray(t, dtype=float)
    h = np.asarray(h, dtype=float)

    total = 0.0
    for j, coeff in enumerate(_binomial_stencil(m)):
        total = total + coeff * np.asarray(f(t + j * h), dtype=float)
    return float(total) if np.ndim(total) == 0 else total


def _mixed_stencil(m: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
    coeffs_1d = _binomial_stencil(m)
    offsets = tensor_grid([np.arange(m + 1)] * count).astype(int)
    coeffs = np.prod(coeffs_1d[offsets], axis=1)
    return offsets, coeffs


def mixed_difference(f: Callable[[np.ndarray], np.ndarray], m: int, e: Iterable[int], h, x):
    """prod_{i in e} Delta^m_{h_i, i} applied to f at x.

    `f` is vectorized over rows of an (n, d) array. `x` is a point (d,) or a batch (n, d);
    `h` broadcasts against `x`. An empty `e` returns f(x).
    """
    if m < 0:
        raise ValueError(f"Difference order must be >= 0, got {m}.")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    points = np.atleast_2d(x)
    d = points.shape[1]

    axes = sorted(set(int(i) for i in e))
    if any(not 0 <= i < d for i in axes):
        raise ValueError(f"Difference axes {axes} out of range for dimension {d}.")

    if not axes:
        values = np.asarray(f(points), dtype=float)
        return float(values[0]) if single else values

    steps = np.broadcast_to(np.asarray(h, dtype=float), points.shape)[:, axes]
    offsets, coeffs = _mixed_stencil(m, len(axes))

    total = np.zeros(len(points))
    shifted = points.copy()
    for offset, coeff in zip(offsets, coeffs):
        shifted[:, axes] = points[:, axes] + offset * steps
        total += coeff * np.asarray(f(shifted), dtype=float)
    return float(total[0]) if single else total


def rectangular_mean(
    f: Callable[[np.ndarray], np.ndarray],
    m: int,
    e: Iterable[int],
    t,
    x,
    quad_points: int = MIN_QUAD_POINTS,
):
    """R^e_m(f, t, x) = int_{[-1, 1]^d} |Delta^{m,e}_{(h_1 t_1, ..., h_d t_d)} f(x)| dh.

    The active axes are integrated with a tensor midpoint rule with `quad_points` cells per
    axis; every inactive axis contributes a factor 2.
    """
    if quad_points < MIN_QUAD_POINTS:
        raise ValueError(f"Need at least {MIN_QUAD_POINTS} quadrature points, got {quad_points}.")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    points = np.atleast_2d(x)
    d = points.shape[1]

    t = np.broadcast_to(np.asarray(t, dtype=float), (d,))
    if np.any(t <= 0.0) or np.any(t > 1.0):
        raise ValueError(f"Step scales must lie in (0, 1], got {t}.")

    axes = sorted(set(int(i) for i in e))
    inactive_factor = 2.0 ** (d - len(axes))

    if not axes:
        values = inactive_factor * np.abs(np.asarray(f(points), dtype=float))
        return float(values[0]) if single else values

    cell = 2.0 / quad_points
    h_axis = -1.0 + (np.arange(quad_points) + 0.5) * cell
    h_nodes = tensor_grid([h_axis] * len(axes))

    total = np.zeros(len(points))
    h = np.zeros(d)
    for node in h_nodes:
        h[axes] = node * t[axes]
        total += np.abs(mixed_difference(f, m, axes, h, points))
    values = inactive_factor * cell ** len(axes) * total
    return float(values[0]) if single else values
