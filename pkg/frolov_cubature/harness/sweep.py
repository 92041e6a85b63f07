import warnings
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import List, Optional

import matplotlib.pyplot as plt
import numpy as np
import wandb

from frolov_cubature.config import SweepConfig
from frolov_cubature.harness.integrands import TestFunction, get_test_function
from frolov_cubature.kernels import CInfKernel, KernelPsiK
from frolov_cubature.rules import (
    CubatureRule,
    build_frolov_generator,
    fibonacci_rule,
    frolov_rule,
    scale_rule_to_box,
    tensor_gauss_rule,
)
from frolov_cubature.rules.cubature import MAX_GAUSS_POINTS, fibonacci_index_for
from frolov_cubature.transforms import build_periodizer, periodize_rule, transform_rule
from frolov_cubature.utils import enlarged_box, fit_order, mean_min_max_dict, unit_box


@dataclass
class SweepRow:
    a: float
    n: int
    error: float


@dataclass
class ConvergenceReport:
    rule_family: str
    modifier: str
    rows: List[SweepRow] = field(default_factory=list)
    fitted_order: Optional[float] = None
    fit_residual: Optional[float] = None
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row.n)

    @property
    def ns(self) -> np.ndarray:
        return np.array([row.n for row in self.rows], dtype=float)

    @property
    def errors(self) -> np.ndarray:
        return np.array([row.error for row in self.rows], dtype=float)

    def fit(self, error_floor: float = 0.0, use_envelope: bool = False) -> Optional[float]:
        result = fit_order(self.ns, self.errors, error_floor=error_floor, use_envelope=use_envelope)
        if result is None:
            self.fitted_order, self.fit_residual = None, None
            warnings.warn(
                f"Sweep of {self.rule_family}/{self.modifier} is too short for an order fit "
                f"({len(self.rows)} rows); fit omitted."
            )
        else:
            self.fitted_order, self.fit_residual = result
        return self.fitted_order

    def asdict(self) -> dict:
        return asdict(self)

    def render(self, path: str = None):
        resolvable = self.errors > 0
        plt.figure()
        plt.loglog(self.ns[resolvable], self.errors[resolvable], marker="o")
        plt.xlabel("n")
        plt.ylabel("|I(f) - Q(f)|")
        title = f"{self.rule_family} / {self.modifier}"
        if self.fitted_order is not None:
            title += f" (order {self.fitted_order:.2f})"
        plt.title(title)
        plt.grid(True, which="both", alpha=0.3)

        if path is None:
            plt.show()
        else:
            plt.savefig(path)
        plt.close()


def measure_error(rule: CubatureRule, f: TestFunction) -> float:
    """|I(f) - Q(f)| for a single integrand."""
    if rule.dim != f.dim:
        raise ValueError(f"Rule dimension {rule.dim} does not match function dimension {f.dim}.")
    return abs(f.exact_integral - rule.apply(f.eval))


def sweep_scales(config: SweepConfig) -> np.ndarray:
    """a_i = a_min 2^(i log2(a_max / a_min) / (steps - 1))."""
    if config.steps == 1:
        return np.array([config.a_min])
    octaves = np.log2(config.a_max / config.a_min)
    return config.a_min * 2.0 ** (np.arange(config.steps) * octaves / (config.steps - 1))


@lru_cache(maxsize=None)
def _generator(d: int):
    return build_frolov_generator(d)


def _base_rule(config: SweepConfig, a: float) -> CubatureRule:
    d = config.dim
    periodize = config.modifier == "periodize"
    box = enlarged_box(d, config.delta) if periodize else unit_box(d)

    if config.rule == "frolov":
        # the same lattice covers the enlarged box wherever the periodizer is nonzero
        return frolov_rule(_generator(d), a, box)

    if config.rule == "fibonacci":
        base = fibonacci_rule(fibonacci_index_for(a**2))
    else:
        base = tensor_gauss_rule(d, int(min(MAX_GAUSS_POINTS, round(a))))

    return scale_rule_to_box(base, box) if periodize else base


def build_rule(config: SweepConfig, a: float) -> CubatureRule:
    base = _base_rule(config, a)

    if config.modifier == "cov":
        kernel = CInfKernel() if config.kernel == "cinf" else KernelPsiK(config.kernel_k)
        return transform_rule(base, kernel)

    if config.modifier == "periodize":
        return periodize_rule(base, build_periodizer(config.kernel_k, config.delta, config.dim))

    return base


def sweep_point(config: SweepConfig, a: float) -> SweepRow:
    f = get_test_function(config.fn, config.dim)
    rule = build_rule(config, a)
    return SweepRow(a=float(a), n=rule.n, error=measure_error(rule, f))


def _log_row(row: SweepRow):
    if wandb.run is None:
        return
    wandb.log({"sweep/a": row.a, "sweep/n": row.n, "sweep/error": row.error})


def _log_report(report: ConvergenceReport):
    if wandb.run is None or not report.rows:
        return
    summary = mean_min_max_dict("sweep/errors", report.errors)
    if report.fitted_order is not None:
        summary["sweep/fitted_order"] = report.fitted_order
    wandb.log(summary)


def convergence_sweep(config: SweepConfig, executor=None) -> ConvergenceReport:
    # executors import this module
    from frolov_cubature.harness.executors import make_executor

    if executor is None:
        executor = make_executor(config)

    rows = executor.run(config, sweep_scales(config))

    seen = set()
    unique_rows = []
    for row in rows:
        if row.n in seen:
            continue
        seen.add(row.n)
        unique_rows.append(row)
        _log_row(row)

    report = ConvergenceReport(
        rule_family=config.rule,
        modifier=config.modifier,
        rows=unique_rows,
        config=config.asdict(),
    )
    report.fit(error_floor=config.error_floor, use_envelope=config.use_envelope)
    _log_report(report)
    return report
