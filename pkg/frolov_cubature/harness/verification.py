from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from frolov_cubature.differences import SmoothnessParams, besov_seminorm, mixed_difference, tl_seminorm
from frolov_cubature.harness.integrands import registry
from frolov_cubature.kernels import KernelPsiK, quotient_sup
from frolov_cubature.rules import build_frolov_generator, tensor_gauss_rule
from frolov_cubature.rules.lattice import is_admissible
from frolov_cubature.transforms import build_periodizer, partition_check, transform_rule


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


def _check_admissibility() -> CheckResult:
    radius = 20
    failed = [d for d in (2, 3) if not is_admissible(build_frolov_generator(d), radius)]
    return CheckResult("admissibility", not failed, f"d in (2, 3), radius {radius}, failed {failed}")


def _check_kernel_exactness() -> CheckResult:
    worst = 0.0
    exact = True
    for k in range(1, 7):
        kernel = KernelPsiK(k)
        exact &= kernel.exact_derivative(0) == 0 and kernel.exact_derivative(1) == 1
        for r in range(1, k + 1):
            exact &= kernel.exact_derivative(0, r) == 0 and kernel.exact_derivative(1, r) == 0
        density = kernel.derivative_coeffs(1)
        total = sum(Fraction(c) / (j + 1) for j, c in enumerate(density))
        worst = max(worst, abs(float(total) - 1.0))
    return CheckResult("kernel exactness", exact and worst <= 1e-12, f"k <= 6, |int psi' - 1| = {worst:.1e}")


def _check_quotient_dichotomy() -> CheckResult:
    mismatches = []
    for k in range(1, 9):
        for n in range(0, min(3, 2 * k) + 1):
            for p in (1.5, 2.0, 4.0):
                threshold = n * p / (p - 1)
                if abs(k - (threshold + 1)) <= 1:
                    continue
                _, diverging = quotient_sup(KernelPsiK(k), n, p)
                if diverging == (k > threshold + 1):
                    mismatches.append((k, n, p))
    return CheckResult("quotient dichotomy", not mismatches, f"mismatches {mismatches}")


def _check_partition_of_unity() -> CheckResult:
    worst = 0.0
    for d, points in ((1, 1000), (2, 100)):
        for k in (2, 3, 5):
            for delta in (0.1, 0.25):
                worst = max(worst, partition_check(build_periodizer(k, delta, d), points))
    return CheckResult("partition of unity", worst <= 1e-12, f"max deviation {worst:.1e}")


def _check_substitution_identity() -> CheckResult:
    rng = np.random.default_rng(0)
    kernel = KernelPsiK(3)
    base = tensor_gauss_rule(2, 6)
    rule = transform_rule(base, kernel)

    worst = 0.0
    for _ in range(20):
        freq = rng.uniform(0.5, 3.0, size=2)

        def f(x, freq=freq):
            return np.cos(x @ freq)

        def g(x, f=f):
            return np.prod(kernel.density(x), axis=-1) * f(kernel.value(x))

        deviation = abs(rule(f) - base(g)) / base.abs_weight_sum
        worst = max(worst, deviation)
    return CheckResult("substitution identity", worst <= 1e-13, f"max scaled deviation {worst:.1e}")


def _check_gauss_constant() -> CheckResult:
    worst = 0.0
    for k in (1, 3, 6):
        for d in (1, 2):
            rule = transform_rule(tensor_gauss_rule(d, k + 1), KernelPsiK(k))
            worst = max(worst, abs(rule(lambda x: np.ones(len(x))) - 1.0))
    return CheckResult("transformed constant", worst <= 1e-13, f"|Q(1) - 1| <= {worst:.1e}")


def _check_seminorm_engine() -> CheckResult:
    params = SmoothnessParams(s=1.5, p=2.0, theta=2.0)
    worst = 0.0
    for f in registry(1):
        grids = dict(j_max=4, lp_grid=64, support=f.support, periodic=f.periodic)
        b = besov_seminorm(f.eval, params, 1, **grids).value
        t = tl_seminorm(f.eval, params, 1, **grids).value
        worst = max(worst, abs(b - t) / max(b, 1e-300))

    annihilated = abs(mixed_difference(lambda x: x[:, 0] * x[:, 1] ** 2, 3, (0, 1), (0.1, 0.2), (0.3, 0.4)))
    passed = worst <= 1e-10 and annihilated <= 1e-12
    return CheckResult("seminorm engine", passed, f"B/F deviation {worst:.1e}, annihilation {annihilated:.1e}")


CHECKS: List[Callable[[], CheckResult]] = [
    _check_admissibility,
    _check_kernel_exactness,
    _check_quotient_dichotomy,
    _check_partition_of_unity,
    _check_substitution_identity,
    _check_gauss_constant,
    _check_seminorm_engine,
]


def run_checks() -> List[CheckResult]:
    return [check() for check in CHECKS]
