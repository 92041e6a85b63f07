import json
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import optimize

from frolov_cubature.utils import integer_slabs


MAX_DIM = 8
ROOT_RESIDUAL = 1e-12
ROOT_SEPARATION = 1e-9
ADMISSIBILITY_TOLERANCE = 1e-9


class RootRefinementError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class LatticeGenerator:
    """Basis of a full-rank lattice in R^d.

    For generators built by `build_frolov_generator`, row i of `basis` holds the powers
    xi_i^0, ..., xi_i^(d-1) of the i-th root of the defining polynomial, so the image of an
    integer vector m is (q_m(xi_1), ..., q_m(xi_d)) with q_m the polynomial whose coefficients
    are m. The coordinate product is then the algebraic norm of q_m(xi), a nonzero integer.
    """

    dim: int
    basis: np.ndarray
    det_abs: float
    poly_coeffs: Tuple[int, ...] = ()
    roots: Tuple[float, ...] = ()
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.shape != (self.dim, self.dim):
            raise ValueError(f"Expected a {self.dim}x{self.dim} basis, got {basis.shape}.")
        if not self.det_abs > 0:
            raise ValueError(f"Lattice basis must be nonsingular, got |det|={self.det_abs}.")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_inverse", np.linalg.inv(basis))

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    def points(self, m: np.ndarray) -> np.ndarray:
        """Lattice points basis @ m for integer vectors given as rows of `m`."""
        return m @ self.basis.T

    def asdict(self) -> dict:
        return {
            "dim": self.dim,
            "poly_coeffs": [int(c) for c in self.poly_coeffs],
            "roots": [float(r) for r in self.roots],
            "basis": self.basis.ravel().tolist(),
            "det_abs": float(self.det_abs),
        }

    def to_json(self) -> str:
        return json.dumps(self.asdict())

    @classmethod
    def from_json(cls, text: str) -> "LatticeGenerator":
        d = json.loads(text)
        dim = d["dim"]
        return cls(
            dim=dim,
            basis=np.asarray(d["basis"], dtype=float).reshape(dim, dim),
            det_abs=d["det_abs"],
            poly_coeffs=tuple(d["poly_coeffs"]),
            roots=tuple(d["roots"]),
        )


def defining_polynomial(d: int) -> Tuple[int, ...]:
    """Integer coefficients (ascending powers) of prod_{j=1}^d (x - (2j - 1)) - 1."""
    coeffs = [1]
    for j in range(1, d + 1):
        root = 2 * j - 1
        shifted = [0] + coeffs
        for i in range(len(coeffs)):
            shifted[i] -= root * coeffs[i]
        coeffs = shifted
    coeffs[0] -= 1
    return tuple(coeffs)


def _product_form(x: float, d: int) -> Tuple[float, float]:
    """P(x) and P'(x), evaluated from the product form to avoid coefficient cancellation."""
    factors = np.array([x - (2 * j - 1) for j in range(1, d + 1)], dtype=float)
    value = float(np.prod(factors)) - 1.0
    derivative = 0.0
    for i in range(d):
        derivative += float(np.prod(np.delete(factors, i)))
    return value, derivative


def _refine_root(d: int, lo: float, hi: float) -> float:
    f = lambda x: _product_form(x, d)[0]
    fprime = lambda x: _product_form(x, d)[1]

    if f(lo) == 0.0:
        root = lo
    elif f(hi) == 0.0:
        root = hi
    else:
        try:
            root = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        except ValueError as e:
            raise RootRefinementError(f"No sign change of P in [{lo}, {hi}] (d={d}).") from e

    # the attainable residual of a float64 root grows with |P'(xi)|
    tolerance = ROOT_RESIDUAL * max(1.0, abs(fprime(root)))
    if abs(f(root)) > tolerance:
        try:
            root = optimize.newton(f, root, fprime=fprime, tol=1e-15, maxiter=50)
        except RuntimeError as e:
            raise RootRefinementError(f"Newton polish did not converge near {root}.") from e

    if abs(f(root)) > tolerance:
        raise RootRefinementError(
            f"Root residual {abs(f(root)):.3e} exceeds {tolerance:.3e} (d={d})."
        )
    return float(root)


def build_frolov_generator(d: int) -> LatticeGenerator:
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"Dimension must be in [1, {MAX_DIM}], got {d}.")

    # P has one root in each [2j - 2, 2j]: the product part alternates sign at even integers
    # with magnitude >= 3 for d >= 2 (and d = 1 has its root at the bracket endpoint x = 2).
    roots = np.array([_refine_root(d, 2.0 * j - 2.0, 2.0 * j) for j in range(1, d + 1)])

    gaps = np.diff(np.sort(roots))
    if len(gaps) and gaps.min() <= ROOT_SEPARATION:
        raise RootRefinementError(f"Roots are not separated: min gap {gaps.min():.3e}.")

    basis = np.vander(roots, N=d, increasing=True)
    det_abs = abs(float(np.linalg.det(basis)))

    gen = LatticeGenerator(
        dim=d,
        basis=basis,
        det_abs=det_abs,
        poly_coeffs=defining_polynomial(d),
        roots=tuple(float(r) for r in roots),
    )
    return gen


def vandermonde_det(roots) -> float:
    roots = np.asarray(roots, dtype=float)
    det = 1.0
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            det *= roots[j] - roots[i]
    return abs(det)


def _multiplication_powers(poly_coeffs) -> np.ndarray:
    """Matrices of multiplication by x^0, ..., x^(d-1) in Z[x]/(P) w.r.t. the monomial basis.

    For P monic with roots xi_i, det(sum_j m_j C^j) = prod_i q_m(xi_i)."""
    d = len(poly_coeffs) - 1
    companion = [[0] * d for _ in range(d)]
    for j in range(d - 1):
        companion[j + 1][j] = 1
    for i in range(d):
        companion[i][d - 1] = -int(poly_coeffs[i])

    powers = []
    current = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(d):
        powers.append(current)
        current = [
            [sum(current[i][l] * companion[l][j] for l in range(d)) for j in range(d)]
            for i in range(d)
        ]
    return np.array(powers, dtype=object)


def _exact_norm_feasible(powers: np.ndarray, radius: int) -> bool:
    d = powers.shape[1]
    entry_bound = radius * sum(int(np.max(np.abs(p))) for p in powers)
    # Hadamard bound on |det|; LU rounding error stays far below 1/2 under 2^44
    return (entry_bound * d ** 0.5) ** d < 2.0 ** 44


def admissibility_check(gen: LatticeGenerator, radius: int) -> float:
    """Minimum of |prod_i (basis @ m)_i| over nonzero integer m with |m|_inf <= radius.

    For generators carrying their defining polynomial the product is evaluated as the algebraic
    norm det(q_m(C)), which is an integer and immune to cancellation in tiny coordinates.
    """
    if radius < 1:
        raise ValueError(f"Radius must be >= 1, got {radius}.")

    powers = None
    if len(gen.poly_coeffs) == gen.dim + 1:
        powers = _multiplication_powers(gen.poly_coeffs)
        if not _exact_norm_feasible(powers, radius):
            powers = None
        else:
            powers = powers.astype(float)

    lo = np.full(gen.dim, -radius)
    hi = np.full(gen.dim, radius)

    min_product = np.inf
    for slab in integer_slabs(lo, hi):
        slab = slab[np.any(slab != 0, axis=1)].astype(float)
        if len(slab) == 0:
            continue
        if powers is not None:
            products = np.abs(np.rint(np.linalg.det(np.einsum("nj,jab->nab", slab, powers))))
        else:
            products = np.abs(np.prod(gen.points(slab), axis=1))
        min_product = min(min_product, float(products.min()))
    return min_product


def is_admissible(gen: LatticeGenerator, radius: int) -> bool:
    return admissibility_check(gen, radius) >= 1.0 - ADMISSIBILITY_TOLERANCE
