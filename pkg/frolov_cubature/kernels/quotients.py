from math import floor, isinf
from typing import Callable, Tuple

import numpy as np

from frolov_cubature.kernels.psi import KernelPsiK, psi_eval


MIN_GRID_LEVELS = 3
MAX_GRID_LEVELS = 14

# a boundary singularity t^e with e < 0 grows by 2^(-e) per dyadic level; the smallest
# exponents that must register as diverging are around e = -1/8
DIVERGENCE_GROWTH = 2.0 ** (1.0 / 8.0)

VARIANTS = (
    "change_of_variable_B",
    "change_of_variable_F",
    "classical_sobolev",
    "multiplier",
)


def _check_levels(grid_levels: int):
    if not MIN_GRID_LEVELS <= grid_levels <= MAX_GRID_LEVELS:
        raise ValueError(
            f"grid_levels must be in [{MIN_GRID_LEVELS}, {MAX_GRID_LEVELS}], got {grid_levels}."
        )


def _phi_derivative(kernel: KernelPsiK, t: np.ndarray, order: int) -> np.ndarray:
    # phi = psi_k', so phi^(n) = psi_k^(n + 1)
    return psi_eval(kernel, t, order + 1)


def _level_sups(quotient: Callable[[np.ndarray], np.ndarray], grid_levels: int) -> np.ndarray:
    """sup of the quotient over the interior dyadic points i / 2^L for L = 1..grid_levels.

    The grids are nested, so the sequence is nondecreasing."""
    sups = np.empty(grid_levels)
    running = 0.0
    for level in range(1, grid_levels + 1):
        t = np.arange(1, 2**level) / 2.0**level
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.abs(quotient(t))
        running = max(running, float(np.nanmax(values)))
        sups[level - 1] = running
    return sups


def _diverging(sups: np.ndarray) -> bool:
    previous, last = sups[-2], sups[-1]
    if not np.isfinite(last):
        return True
    if previous == 0.0:
        return False
    return bool(last > DIVERGENCE_GROWTH * previous)


def quotient_sup(
    kernel: KernelPsiK, n: int, p: float, grid_levels: int = 12
) -> Tuple[float, bool]:
    """Estimate sup_{0 < t < 1} |phi^(n)(t)| / phi(t)^(1/p) for phi = psi_k'.

    Boundedness is expected when k > n p / (p - 1) + 1. p = inf uses the exponent 0.
    Only p > 1 is supported; the behaviour for p <= 1 is not characterized by this test.
    """
    if not (p > 1 or isinf(p)):
        raise ValueError(f"Quotient exponent requires p > 1, got {p}.")
    if not 0 <= n <= 2 * kernel.k:
        raise ValueError(f"Derivative order must be in [0, {2 * kernel.k}], got {n}.")
    _check_levels(grid_levels)

    inv_p = 0.0 if isinf(p) else 1.0 / p

    def quotient(t):
        return _phi_derivative(kernel, t, n) / _phi_derivative(kernel, t, 0) ** inv_p

    sups = _level_sups(quotient, grid_levels)
    return float(sups[-1]), _diverging(sups)


def product_quotient_sup(
    kernel: KernelPsiK, r: int, alpha: int, grid_levels: int = 12
) -> Tuple[float, bool]:
    """Estimate sup_{0 < t < 1} |phi^(r)(t) phi^(alpha)(t)| / phi(t)."""
    if r < 0 or alpha < 0 or r + alpha > 2 * kernel.k:
        raise ValueError(
            f"Orders must be nonnegative with r + alpha <= {2 * kernel.k}, got r={r}, alpha={alpha}."
        )
    _check_levels(grid_levels)

    def quotient(t):
        phi = _phi_derivative(kernel, t, 0)
        return _phi_derivative(kernel, t, r) * _phi_derivative(kernel, t, alpha) / phi

    sups = _level_sups(quotient, grid_levels)
    return float(sups[-1]), _diverging(sups)


def min_k_for(s: float, p: float, variant: str) -> int:
    """Smallest kernel index k meeting the smoothness hypothesis of the given variant."""
    if not s > 0:
        raise ValueError(f"Smoothness must be positive, got {s}.")
    if variant not in VARIANTS:
        raise ValueError(f"Unknown variant {variant}. Expected one of {VARIANTS}.")
    if not (p >= 1 or isinf(p)):
        raise ValueError(f"Integrability must satisfy p >= 1, got {p}.")

    if variant == "change_of_variable_B":
        return floor(s) + (4 if p == 1 else 3)

    if variant == "change_of_variable_F":
        if p == 1 or isinf(p):
            raise ValueError(f"Triebel-Lizorkin variant requires 1 < p < inf, got {p}.")
        return floor(s) + 3

    if variant == "classical_sobolev":
        if p == 1:
            raise ValueError("The classical condition k >= s p / (p - 1) + 1 is undefined for p = 1.")
        if isinf(p):
            return floor(s) + 1
        return floor(s * p / (p - 1)) + 1

    # pointwise multiplier
    return floor(s) + 1
