from dataclasses import dataclass, field
from functools import lru_cache
from math import cos, e, pi
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import interpolate, special

from frolov_cubature.utils import Box, as_box, tensor_grid, unit_box


ORACLE_POINTS = 10**6
ORACLE_GAUSS_POINTS = 5
ORACLE_TOLERANCE = 1e-8

DEFAULT_STRIKE = 0.5
BUMP_KNOTS = (0.2, 0.4, 0.6, 0.8)
SPLINE_WIDTH = 0.2

SMOOTH = float("inf")


@dataclass(eq=False)
class TestFunction:
    """An integrand on [0, 1]^d with a known integral over the unit cube.

    `fn` is vectorized over the rows of an (n, d) array. `breakpoints` lists the coordinates
    (on any axis) where the function or one of its derivatives is not smooth.
    """

    __test__ = False

    name: str
    dim: int
    fn: Callable[[np.ndarray], np.ndarray]
    exact_integral: float
    nominal_smoothness: Tuple[float, float] = (SMOOTH, 2.0)
    periodic: bool = False
    support: Box = None
    breakpoints: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.support = unit_box(self.dim) if self.support is None else as_box(self.support, self.dim)

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"{self.name} expects points of dimension {self.dim}, got {x.shape[-1]}.")
        return np.asarray(self.fn(x), dtype=float)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.eval(x)

    def shifted(self, v: Sequence[float]) -> "TestFunction":
        """x -> f(x + v). Only meaningful on [0, 1]^d for periodic functions."""
        if not self.periodic:
            raise ValueError(f"{self.name} is not periodic; shifting changes its integral.")
        v = np.asarray(v, dtype=float)
        fn = self.fn
        return TestFunction(
            name=f"{self.name}+shift",
            dim=self.dim,
            fn=lambda x: fn(x + v),
            exact_integral=self.exact_integral,
            nominal_smoothness=self.nominal_smoothness,
            periodic=True,
        )

    def sup_norm_bound(self, points_per_axis: int = 64) -> float:
        """Grid estimate of sup |f| over the support box."""
        lo, hi = self.support
        x = tensor_grid([np.linspace(lo[i], hi[i], points_per_axis) for i in range(self.dim)])
        return float(np.abs(self.eval(x)).max())

    def verify_integral(self, total_points: int = ORACLE_POINTS) -> float:
        oracle = composite_gauss_integral(self.fn, self.dim, self.breakpoints, total_points)
        deviation = abs(oracle - self.exact_integral)
        if deviation > ORACLE_TOLERANCE * max(1.0, abs(self.exact_integral)):
            raise ValueError(
                f"Registration of {self.name} (d={self.dim}) failed: exact integral "
                f"{self.exact_integral} vs oracle {oracle} (deviation {deviation:.3e})."
            )
        return oracle


def composite_gauss_integral(
    fn: Callable[[np.ndarray], np.ndarray],
    d: int,
    breakpoints: Sequence[float] = (),
    total_points: int = ORACLE_POINTS,
) -> float:
    """Tensor composite Gauss-Legendre quadrature over [0, 1]^d with roughly `total_points`
    nodes. Cell edges include every breakpoint inside (0, 1)."""
    per_axis = max(ORACLE_GAUSS_POINTS, int(round(total_points ** (1.0 / d))))
    cells = max(1, per_axis // ORACLE_GAUSS_POINTS)

    interior = [b for b in breakpoints if 0.0 < b < 1.0]
    edges = np.unique(np.concatenate([np.linspace(0.0, 1.0, cells + 1), interior]))

    t, w = special.roots_legendre(ORACLE_GAUSS_POINTS)
    widths = np.diff(edges)
    nodes = (edges[:-1, None] + widths[:, None] * (t[None, :] + 1.0) / 2.0).ravel()
    weights = (widths[:, None] * w[None, :] / 2.0).ravel()

    # one slab per node of the first axis keeps memory flat for d >= 2
    if d == 1:
        return float(weights @ fn(nodes[:, None]))

    rest = tensor_grid([nodes] * (d - 1))
    rest_weights = np.prod(tensor_grid([weights] * (d - 1)), axis=1)
    total = 0.0
    for x0, w0 in zip(nodes, weights):
        points = np.concatenate([np.full((len(rest), 1), x0), rest], axis=1)
        total += w0 * float(rest_weights @ fn(points))
    return total


def _bspline(knots: Sequence[float]) -> interpolate.BSpline:
    return interpolate.BSpline.basis_element(np.asarray(knots, dtype=float), extrapolate=False)


def _spline_values(spline: interpolate.BSpline, t: np.ndarray) -> np.ndarray:
    return np.nan_to_num(spline(t), nan=0.0)


def polynomial(d: int) -> TestFunction:
    return TestFunction(
        name="poly",
        dim=d,
        fn=lambda x: np.prod(3.0 * x**2, axis=-1),
        exact_integral=1.0,
    )


def kink(d: int, strike: float = DEFAULT_STRIKE) -> TestFunction:
    """Payoff-like f(x) = max(0, x_1 - K) prod_{i >= 2} 3 x_i^2."""

    def fn(x):
        return np.maximum(0.0, x[..., 0] - strike) * np.prod(3.0 * x[..., 1:] ** 2, axis=-1)

    return TestFunction(
        name="kink",
        dim=d,
        fn=fn,
        exact_integral=(1.0 - strike) ** 2 / 2.0,
        nominal_smoothness=(1.5, 2.0),
        breakpoints=(strike,),
    )


def periodic_cosine(d: int) -> TestFunction:
    return TestFunction(
        name="periodic_cos",
        dim=d,
        fn=lambda x: np.prod(1.0 + 0.5 * np.cos(2.0 * pi * x), axis=-1),
        exact_integral=1.0,
        periodic=True,
    )


def bspline_bump(d: int) -> TestFunction:
    """Tensor quadratic B-spline with knots 0.2, 0.4, 0.6, 0.8, scaled to integral 1."""
    spline = _bspline(BUMP_KNOTS)
    scale = 1.0 / float(spline.integrate(BUMP_KNOTS[0], BUMP_KNOTS[-1]))

    return TestFunction(
        name="bspline_bump",
        dim=d,
        fn=lambda x: np.prod(scale * _spline_values(spline, x), axis=-1),
        exact_integral=1.0,
        nominal_smoothness=(3.0, 1.0),
        support=[(BUMP_KNOTS[0], BUMP_KNOTS[-1])] * d,
        breakpoints=BUMP_KNOTS,
    )


def exponential(d: int) -> TestFunction:
    return TestFunction(
        name="exp",
        dim=d,
        fn=lambda x: np.exp(np.sum(x, axis=-1)),
        exact_integral=(e - 1.0) ** d,
    )


def kink_bump(d: int, strike: float = DEFAULT_STRIKE) -> TestFunction:
    """f(x) = max(0, x_1 - K) 2 sin^2(pi x_1) prod_{i >= 2} 2 sin^2(pi x_i), which vanishes to
    second order on the cube boundary and keeps the kink at x_1 = K."""

    def fn(x):
        window = np.prod(2.0 * np.sin(pi * x) ** 2, axis=-1)
        return np.maximum(0.0, x[..., 0] - strike) * window

    integral = (1.0 - strike) ** 2 / 2.0 - (1.0 - cos(2.0 * pi * strike)) / (4.0 * pi**2)
    return TestFunction(
        name="kink_bump",
        dim=d,
        fn=fn,
        exact_integral=integral,
        nominal_smoothness=(1.5, 2.0),
        breakpoints=(strike,),
    )


REGISTRY = {
    "poly": polynomial,
    "kink": kink,
    "periodic_cos": periodic_cosine,
    "bspline_bump": bspline_bump,
    "exp": exponential,
    "kink_bump": kink_bump,
}


@lru_cache(maxsize=None)
def _checked_registry(d: int) -> Tuple[TestFunction, ...]:
    functions = tuple(factory(d) for factory in REGISTRY.values())
    for f in functions:
        f.verify_integral()
    return functions


def registry(d: int = 1) -> List[TestFunction]:
    if d < 1:
        raise ValueError(f"Dimension must be positive, got {d}.")
    return list(_checked_registry(d))


def get_test_function(name: str, d: int) -> TestFunction:
    for f in registry(d):
        if f.name == name:
            return f
    raise ValueError(f"Unknown test function {name}. Expected one of {list(REGISTRY)}.")


def spline_family(d: int, count: int = 10, width: float = SPLINE_WIDTH) -> List[TestFunction]:
    """Cubic tensor B-splines f_i(x) = prod_j B((x_j - c_i) / width) with centres c_i spread
    over [0, 1], so the outer members do not vanish on the cube boundary."""
    if count < 1:
        raise ValueError(f"Need at least one spline, got {count}.")

    family = []
    for c in np.linspace(0.0, 1.0, count):
        knots = c + width * np.arange(-2, 3)
        spline = _bspline(knots)
        integral_1d = float(spline.integrate(0.0, 1.0))
        family.append(
            TestFunction(
                name=f"cubic_spline(c={c:.3f})",
                dim=d,
                fn=lambda x, spline=spline: np.prod(_spline_values(spline, x), axis=-1),
                exact_integral=integral_1d**d,
                nominal_smoothness=(3.5, 2.0),
                support=[(knots[0], knots[-1])] * d,
                breakpoints=tuple(knots),
            )
        )
    return family
