import csv
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from frolov_cubature.rules.lattice import LatticeGenerator
from frolov_cubature.utils import as_box, box_volume, integer_slabs, tensor_grid


MAX_FIBONACCI = 10**7
# F_35 = 9227465 is the largest Fibonacci number <= MAX_FIBONACCI
MAX_FIBONACCI_INDEX = 35
MAX_GAUSS_POINTS = 64


class EmptyRuleError(ValueError):
    pass


@dataclass(eq=False)
class CubatureRule:
    """Q(f) = sum_i weights[i] * f(nodes[i])."""

    nodes: np.ndarray
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)

        if self.nodes.ndim != 2:
            raise ValueError(f"Expected nodes of shape (n, d), got {self.nodes.shape}.")
        if len(self.nodes) != len(self.weights):
            raise ValueError(
                f"Got {len(self.nodes)} nodes but {len(self.weights)} weights."
            )
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("All weights must be finite.")

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def abs_weight_sum(self) -> float:
        return float(np.abs(self.weights).sum())

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Apply the rule to a function vectorized over rows of an (n, d) array."""
        if self.n == 0:
            return 0.0
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))

    def __call__(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return self.apply(f)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"x_{i + 1}" for i in range(self.dim)] + ["weight"])
        for node, weight in zip(self.nodes, self.weights):
            writer.writerow([repr(float(x)) for x in node] + [repr(float(weight))])
        return buffer.getvalue()

    def __str__(self) -> str:
        return f"CubatureRule(label={self.label}, d={self.dim}, n={self.n})"


def _box_corners(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return tensor_grid([np.array([lo[i], hi[i]]) for i in range(len(lo))])


def frolov_rule(gen: LatticeGenerator, a: float, box) -> CubatureRule:
    """All points (1/a) * basis @ m lying in the closed box, with equal weights
    |det basis| / a^d, the covolume of the scaled lattice."""
    if not a > 1:
        raise ValueError(f"Scale must satisfy a > 1, got {a}.")
    lo, hi = as_box(box, gen.dim)

    # every m with (1/a) basis m in the box satisfies m = a * inv(basis) x for some x in the box,
    # so the image of the box corners under a * inv(basis) bounds the candidates.
    m_corners = a * _box_corners(lo, hi) @ gen.inverse.T
    m_lo = np.floor(m_corners.min(axis=0)).astype(np.int64) - 1
    m_hi = np.ceil(m_corners.max(axis=0)).astype(np.int64) + 1

    chunks = []
    for slab in integer_slabs(m_lo, m_hi):
        points = gen.points(slab.astype(float)) / a
        inside = np.all((points >= lo) & (points <= hi), axis=1)
        if inside.any():
            chunks.append(points[inside])

    if not chunks:
        raise EmptyRuleError(
            f"No lattice points in the box for a={a}; increase the scale."
        )

    nodes = np.concatenate(chunks, axis=0)
    weight = gen.det_abs / a**gen.dim
    return CubatureRule(
        nodes=nodes,
        weights=np.full(len(nodes), weight),
        label=f"frolov(d={gen.dim}, a={a:.6g})",
    )


def fibonacci_numbers(index: int):
    """(F_{index-1}, F_index) with F_1 = F_2 = 1."""
    prev, current = 0, 1
    for _ in range(index - 1):
        prev, current = current, prev + current
    return prev, current


def fibonacci_rule(fib_index: int) -> CubatureRule:
    if fib_index < 3:
        raise ValueError(f"Fibonacci index must be >= 3, got {fib_index}.")
    if fib_index > MAX_FIBONACCI_INDEX:
        raise ValueError(
            f"F_{fib_index} exceeds the supported maximum {MAX_FIBONACCI}; "
            f"the largest index is {MAX_FIBONACCI_INDEX}."
        )
    prev, count = fibonacci_numbers(fib_index)

    i = np.arange(count, dtype=np.int64)
    nodes = np.stack([i / count, (i * prev % count) / count], axis=-1)
    return CubatureRule(
        nodes=nodes,
        weights=np.full(count, 1.0 / count),
        label=f"fibonacci(F_{fib_index}={count})",
    )


def fibonacci_index_for(min_points: float) -> int:
    """Smallest index >= 3 with F_index >= min_points."""
    if min_points > MAX_FIBONACCI:
        raise ValueError(
            f"No supported Fibonacci lattice has {min_points:.6g} points (maximum {MAX_FIBONACCI})."
        )
    index = 3
    while fibonacci_numbers(index)[1] < min_points:
        index += 1
    return index


def tensor_gauss_rule(d: int, points_per_axis: int) -> CubatureRule:
    """Tensor Gauss-Legendre rule on [0, 1]^d."""
    if not 1 <= points_per_axis <= MAX_GAUSS_POINTS:
        raise ValueError(
            f"Points per axis must be in [1, {MAX_GAUSS_POINTS}], got {points_per_axis}."
        )
    if d < 1:
        raise ValueError(f"Dimension must be positive, got {d}.")

    t, w = special.roots_legendre(points_per_axis)
    t = (t + 1.0) / 2.0
    w = w / 2.0

    nodes = tensor_grid([t] * d)
    weights = np.prod(tensor_grid([w] * d), axis=1)
    return CubatureRule(
        nodes=nodes,
        weights=weights,
        label=f"gauss(d={d}, points={points_per_axis})",
    )


def scale_rule_to_box(rule: CubatureRule, box) -> CubatureRule:
    """Affinely map a rule on [0, 1]^d onto the given box."""
    lo, hi = as_box(box, rule.dim)
    return CubatureRule(
        nodes=lo + rule.nodes * (hi - lo),
        weights=rule.weights * box_volume((lo, hi)),
        label=f"{rule.label}@box",
    )
