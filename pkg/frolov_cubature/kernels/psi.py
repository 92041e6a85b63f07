import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial


def _psi_coefficients(k: int) -> Tuple[Fraction, ...]:
    """Ascending coefficients of psi_k(t) = c * int_0^t xi^k (1 - xi)^k dxi on [0, 1]."""
    norm_const = Fraction(factorial(2 * k + 1), factorial(k) ** 2)
    coeffs = [Fraction(0)] * (2 * k + 2)
    for i in range(k + 1):
        power = k + i + 1
        coeffs[power] = norm_const * comb(k, i) * (-1) ** i / power
    return tuple(coeffs)


def _differentiate(coeffs: Tuple[Fraction, ...], order: int) -> Tuple[Fraction, ...]:
    for _ in range(order):
        coeffs = tuple(j * coeffs[j] for j in range(1, len(coeffs)))
    return coeffs


@dataclass(frozen=True, eq=False)
class KernelPsiK:
    """Polynomial change-of-variable kernel

        psi_k(t) = int_0^t xi^k (1 - xi)^k dxi / int_0^1 xi^k (1 - xi)^k dxi

    clamped to 0 below 0 and 1 above 1. Its derivative phi = psi_k' is the bump
    norm_const * t^k (1 - t)^k.
    """

    k: int
    exact_norm_const: Fraction = field(init=False, repr=False)
    poly_coeffs: Tuple[Fraction, ...] = field(init=False, repr=False)
    _float_coeffs: Dict[int, np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        if not (isinstance(self.k, (int, np.integer)) and self.k >= 1):
            raise ValueError(f"Kernel index k must be a positive integer, got {self.k}.")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(
            self, "exact_norm_const", Fraction(factorial(2 * self.k + 1), factorial(self.k) ** 2)
        )
        object.__setattr__(self, "poly_coeffs", _psi_coefficients(self.k))
        object.__setattr__(self, "_float_coeffs", {})

    @property
    def degree(self) -> int:
        return 2 * self.k + 1

    @property
    def norm_const(self) -> float:
        return float(self.exact_norm_const)

    def derivative_coeffs(self, order: int) -> Tuple[Fraction, ...]:
        return _differentiate(self.poly_coeffs, order)

    def float_coeffs(self, order: int) -> np.ndarray:
        if order not in self._float_coeffs:
            self._float_coeffs[order] = np.array(
                [float(c) for c in self.derivative_coeffs(order)], dtype=float
            )
        return self._float_coeffs[order]

    def exact_derivative(self, t: Union[Fraction, int], order: int = 0) -> Fraction:
        """psi_k^(order)(t) in rational arithmetic (one-sided from inside at t = 0, 1)."""
        t = Fraction(t)
        if t < 0 or t > 1:
            if order == 0:
                return Fraction(0) if t < 0 else Fraction(1)
            return Fraction(0)
        if order > self.degree:
            return Fraction(0)
        value = Fraction(0)
        for c in reversed(self.derivative_coeffs(order)):
            value = value * t + c
        return value

    def value(self, t):
        return psi_eval(self, t, 0)

    def density(self, t):
        return psi_eval(self, t, 1)

    def asdict(self) -> dict:
        return {
            "type": "psi_k",
            "k": self.k,
            "norm_const": self.norm_const,
            "coeffs": [[c.numerator, c.denominator] for c in self.poly_coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.asdict())

    @classmethod
    def from_json(cls, text: str) -> "KernelPsiK":
        d = json.loads(text)
        if d.get("type") != "psi_k":
            raise ValueError(f"Not a psi_k kernel descriptor: {d.get('type')}.")
        kernel = cls(d["k"])
        stored = tuple(Fraction(num, den) for num, den in d["coeffs"])
        if stored != kernel.poly_coeffs:
            raise ValueError(f"Stored coefficients do not match psi_{kernel.k}.")
        return kernel


def psi_eval(kernel: KernelPsiK, t, order: int = 0):
    """Evaluate psi_k (order 0, clamped outside [0, 1]) or its order-th derivative
    (zero outside [0, 1]). Orders above the polynomial degree return exact zeros.

    Values on (1/2, 1] are taken from the mirror point through
    psi_k^(r)(1 - u) = (-1)^(r + 1) psi_k^(r)(u), r >= 1, and psi_k(1 - u) = 1 - psi_k(u).
    """
    if order < 0:
        raise ValueError(f"Derivative order must be >= 0, got {order}.")

    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)

    if order > kernel.degree:
        out = np.zeros_like(t)
        return float(out) if scalar else out

    mirrored = t > 0.5
    u = np.where(mirrored, 1.0 - t, t)
    values = polynomial.polyval(u, kernel.float_coeffs(order))

    if order == 0:
        values = np.where(mirrored, 1.0 - values, values)
        out = np.where(t < 0.0, 0.0, np.where(t > 1.0, 1.0, values))
    else:
        sign = (-1.0) ** (order + 1)
        values = np.where(mirrored, sign * values, values)
        out = np.where((t >= 0.0) & (t <= 1.0), values, 0.0)

    return float(out) if scalar else out
