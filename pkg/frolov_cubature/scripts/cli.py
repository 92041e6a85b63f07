import sys
from argparse import ArgumentParser
from fractions import Fraction

import numpy as np
import wandb

from frolov_cubature.config import EXECUTORS, FORMATS, KERNELS, MODIFIERS, RULES, SweepConfig
from frolov_cubature.harness.report import emit_report, write_report
from frolov_cubature.harness.sweep import convergence_sweep
from frolov_cubature.harness.verification import run_checks
from frolov_cubature.kernels import KernelPsiK, product_quotient_sup, quotient_sup


INSPECT_P = (1.5, 2.0, 4.0, np.inf)


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser("frolov-cubature")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # every bench flag defaults to None so a config file can fill it in
    bench = subparsers.add_parser("bench", help="Run a convergence sweep.")
    bench.add_argument("--config", type=str, default=None)
    bench.add_argument("--dim", type=int)
    bench.add_argument("--rule", choices=RULES)
    bench.add_argument("--modifier", choices=MODIFIERS)
    bench.add_argument("--kernel", choices=KERNELS)
    bench.add_argument("--kernel-k", dest="kernel_k", type=int)
    bench.add_argument("--delta", type=float)
    bench.add_argument("--fn", type=str)
    bench.add_argument("--a-min", dest="a_min", type=float)
    bench.add_argument("--a-max", dest="a_max", type=float)
    bench.add_argument("--steps", type=int)
    bench.add_argument("--error-floor", dest="error_floor", type=float)
    bench.add_argument("--envelope", dest="use_envelope", action="store_const", const=True)
    bench.add_argument("--executor", choices=EXECUTORS)
    bench.add_argument("--num-workers", dest="num_workers", type=int)
    bench.add_argument("--tqdm", dest="use_tqdm", action="store_const", const=True)
    bench.add_argument("--out", type=str)
    bench.add_argument("--format", choices=FORMATS)
    bench.add_argument("--plot", type=str, default=None, help="Save a log-log plot to this path.")
    bench.add_argument("--wandb-project", dest="wandb_project", type=str, default=None)

    subparsers.add_parser("verify", help="Run the invariant check suite.")

    kernels = subparsers.add_parser("kernels", help="Inspect change-of-variable kernels.")
    kernels.add_argument("--inspect", type=int, required=True, metavar="K")

    return parser


_NON_CONFIG_FLAGS = ("command", "config", "plot", "wandb_project")


def bench(args) -> int:
    overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG_FLAGS}
    if args.wandb_project is not None:
        overrides["wandb_config"] = {"project": args.wandb_project}

    if args.config is not None:
        config = SweepConfig.from_json(args.config, **overrides)
    else:
        config = SweepConfig(**{k: v for k, v in overrides.items() if v is not None})

    if config.use_wandb:
        wandb.init(**config.wandb_config, config=config.asdict())

    report = convergence_sweep(config)

    if config.out is None:
        print(emit_report(report, config.format), end="")
    else:
        write_report(report, config.out, config.format)
        print(f"Wrote {len(report.rows)} rows to {config.out}.")

    if args.plot is not None:
        report.render(args.plot)
    return 0


def verify(args) -> int:
    results = run_checks()
    for result in results:
        print(result)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed.")
    return 1 if failed else 0


def inspect_kernel(args) -> int:
    kernel = KernelPsiK(args.inspect)
    print(f"psi_{kernel.k}: degree {kernel.degree}, norm_const {kernel.exact_norm_const}")
    for power, c in enumerate(kernel.poly_coeffs):
        if c != 0:
            print(f"  t^{power}: {c}")

    print(f"psi_{kernel.k}(1/4) = {kernel.exact_derivative(Fraction(1, 4))}")
    print("quotient sup |phi^(n)| / phi^(1/p):")
    for n in range(0, min(3, 2 * kernel.k) + 1):
        for p in INSPECT_P:
            sup, diverging = quotient_sup(kernel, n, p)
            flag = "diverging" if diverging else "bounded"
            print(f"  n={n} p={p}: {sup:.6g} ({flag})")

    print("product quotient sup |phi^(r) phi^(alpha)| / phi:")
    for r in range(0, 3):
        for alpha in range(r, min(2, 2 * kernel.k - r) + 1):
            sup, diverging = product_quotient_sup(kernel, r, alpha)
            flag = "diverging" if diverging else "bounded"
            print(f"  r={r} alpha={alpha}: {sup:.6g} ({flag})")
    return 0


COMMANDS = {"bench": bench, "verify": verify, "kernels": inspect_kernel}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
