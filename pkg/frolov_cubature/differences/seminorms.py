import itertools
import json
from dataclasses import dataclass, field
from math import floor, isinf
from numbers import Integral
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import wandb
from tqdm import tqdm

from frolov_cubature.differences.operators import MIN_QUAD_POINTS, active_axes, rectangular_mean
from frolov_cubature.utils import Box, as_box, midpoint_grid, unit_box


BESOV = "B"
TRIEBEL_LIZORKIN = "F"


@dataclass(frozen=True)
class SmoothnessParams:
    s: float
    p: float
    theta: float
    m: Optional[int] = None

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"p must be in (0, inf], got {self.p}.")
        if not self.theta > 0:
            raise ValueError(f"theta must be in (0, inf], got {self.theta}.")
        if self.m is None:
            object.__setattr__(self, "m", floor(self.s) + 1)
        if isinstance(self.m, bool) or not isinstance(self.m, Integral) or self.m < 1:
            raise ValueError(f"Difference order m must be a positive integer, got {self.m!r}.")
        if not self.m > self.s:
            raise ValueError(f"Difference order m={self.m} must exceed s={self.s}.")

    @property
    def sigma_p(self) -> float:
        return max(1.0 / self.p - 1.0, 0.0)

    @property
    def sigma_p_theta(self) -> float:
        return max(1.0 / self.p - 1.0, 1.0 / self.theta - 1.0, 0.0)

    def check_besov(self):
        if not self.s > self.sigma_p:
            raise ValueError(f"Besov seminorm requires s > sigma_p = {self.sigma_p}, got s={self.s}.")

    def check_triebel_lizorkin(self):
        if isinf(self.p):
            raise ValueError("Triebel-Lizorkin seminorm requires p < inf.")
        if not self.s > self.sigma_p_theta:
            raise ValueError(
                f"Triebel-Lizorkin seminorm requires s > sigma_(p,theta) = {self.sigma_p_theta}, "
                f"got s={self.s}."
            )


@dataclass
class SeminormResult:
    value: float
    last_level_increment: float
    params: SmoothnessParams
    j_max: int
    lp_grid: int
    scale: str = BESOV
    # unweighted ||R^{e(j)}_m(f, 2^-j, .)||_p per level vector j
    level_norms: Dict[Tuple[int, ...], float] = field(default_factory=dict)

    def record(self) -> dict:
        return {
            "s": self.params.s,
            "p": self.params.p,
            "theta": self.params.theta,
            "m": self.params.m,
            "j_max": self.j_max,
            "lp_grid": self.lp_grid,
            "value": self.value,
            "last_level_increment": self.last_level_increment,
        }

    def to_json(self) -> str:
        return json.dumps(self.record())

    def __float__(self) -> float:
        return float(self.value)


def _lp_norm(values: np.ndarray, p: float, cell_volume: float) -> float:
    values = np.abs(values)
    if isinf(p):
        return float(values.max()) if len(values) else 0.0
    return float((cell_volume * np.sum(values**p)) ** (1.0 / p))


def _combine(terms: np.ndarray, theta: float, axis=0):
    """l_theta combination of nonnegative terms (sup for theta = inf)."""
    if isinf(theta):
        return np.max(terms, axis=axis)
    return np.sum(terms**theta, axis=axis) ** (1.0 / theta)


def seminorm_domain(d: int, m: int, support=None, periodic: bool = False) -> Box:
    """Integration domain for the L_p norm: the torus [0, 1]^d for periodic inputs, otherwise
    the support box enlarged by the stencil reach m."""
    if periodic:
        return unit_box(d)
    lo, hi = as_box(support, d) if support is not None else unit_box(d)
    return lo - m, hi + m


def _level_means(
    f: Callable[[np.ndarray], np.ndarray],
    params: SmoothnessParams,
    d: int,
    j_max: int,
    lp_grid: int,
    support,
    periodic: bool,
    quad_points: int,
    use_tqdm: bool,
):
    if j_max < 0:
        raise ValueError(f"j_max must be >= 0, got {j_max}.")
    if lp_grid < 1:
        raise ValueError(f"lp_grid must be positive, got {lp_grid}.")

    box = seminorm_domain(d, params.m, support=support, periodic=periodic)
    points, cell_volume = midpoint_grid(box, lp_grid)

    levels = list(itertools.product(range(j_max + 1), repeat=d))
    for j in tqdm(levels, disable=not use_tqdm, desc="levels"):
        t = 2.0 ** -np.array(j, dtype=float)
        means = rectangular_mean(f, params.m, active_axes(j), t, points, quad_points=quad_points)
        yield j, means, cell_volume


def _log_result(result: SeminormResult):
    if wandb.run is None:
        return
    wandb.log({f"seminorm/{key}": value for key, value in result.record().items()})


def besov_seminorm(
    f: Callable[[np.ndarray], np.ndarray],
    params: SmoothnessParams,
    d: int,
    j_max: int,
    lp_grid: int,
    support=None,
    periodic: bool = False,
    quad_points: int = MIN_QUAD_POINTS,
    use_tqdm: bool = False,
) -> SeminormResult:
    """(sum_{|j|_inf <= j_max} 2^(s |j|_1 theta) ||R^{e(j)}_m(f, 2^-j, .)||_p^theta)^(1/theta)."""
    params.check_besov()

    level_norms = {}
    weighted = []
    inner = []
    for j, means, cell_volume in _level_means(
        f, params, d, j_max, lp_grid, support, periodic, quad_points, use_tqdm
    ):
        norm = _lp_norm(means, params.p, cell_volume)
        level_norms[j] = norm
        weighted.append(2.0 ** (params.s * sum(j)) * norm)
        inner.append(max(j) < j_max)

    weighted = np.array(weighted)
    inner = np.array(inner)
    value = float(_combine(weighted, params.theta))
    previous = float(_combine(weighted[inner], params.theta)) if inner.any() else 0.0

    result = SeminormResult(
        value=value,
        last_level_increment=value - previous,
        params=params,
        j_max=j_max,
        lp_grid=lp_grid,
        scale=BESOV,
        level_norms=level_norms,
    )
    _log_result(result)
    return result


def tl_seminorm(
    f: Callable[[np.ndarray], np.ndarray],
    params: SmoothnessParams,
    d: int,
    j_max: int,
    lp_grid: int,
    support=None,
    periodic: bool = False,
    quad_points: int = MIN_QUAD_POINTS,
    use_tqdm: bool = False,
) -> SeminormResult:
    """|| (sum_{|j|_inf <= j_max} 2^(s |j|_1 theta) R^{e(j)}_m(f, 2^-j, .)^theta)^(1/theta) ||_p,
    with the inner sum taken pointwise on the L_p grid."""
    params.check_triebel_lizorkin()

    level_norms = {}
    theta = params.theta
    total = None
    inner_total = None
    cell_volume = 1.0
    for j, means, cell_volume in _level_means(
        f, params, d, j_max, lp_grid, support, periodic, quad_points, use_tqdm
    ):
        level_norms[j] = _lp_norm(means, params.p, cell_volume)
        term = 2.0 ** (params.s * sum(j)) * means
        if total is None:
            total = np.zeros_like(term)
            inner_total = np.zeros_like(term)

        if isinf(theta):
            total = np.maximum(total, term)
            if max(j) < j_max:
                inner_total = np.maximum(inner_total, term)
        else:
            total += term**theta
            if max(j) < j_max:
                inner_total += term**theta

    if not isinf(theta):
        total = total ** (1.0 / theta)
        inner_total = inner_total ** (1.0 / theta)

    value = _lp_norm(total, params.p, cell_volume)
    previous = _lp_norm(inner_total, params.p, cell_volume) if j_max > 0 else 0.0

    result = SeminormResult(
        value=value,
        last_level_increment=value - previous,
        params=params,
        j_max=j_max,
        lp_grid=lp_grid,
        scale=TRIEBEL_LIZORKIN,
        level_norms=level_norms,
    )
    _log_result(result)
    return result


def seminorm(f, params: SmoothnessParams, d: int, scale: str = BESOV, **kwargs) -> SeminormResult:
    if scale == BESOV:
        return besov_seminorm(f, params, d, **kwargs)
    if scale == TRIEBEL_LIZORKIN:
        return tl_seminorm(f, params, d, **kwargs)
    raise ValueError(f"Unknown scale {scale}. Expected {BESOV} or {TRIEBEL_LIZORKIN}.")
