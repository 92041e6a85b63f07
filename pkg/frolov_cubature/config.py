import json
from dataclasses import asdict, dataclass, fields
from typing import Optional

from frolov_cubature.transforms.periodization import DEFAULT_DELTA


RULES = ("frolov", "fibonacci", "gauss")
MODIFIERS = ("none", "cov", "periodize")
KERNELS = ("psi_k", "cinf")
EXECUTORS = ("serial", "ray")
FORMATS = ("csv", "json")

DEFAULT_J_MAX = {1: 8, 2: 6, 3: 4}


@dataclass
class SweepConfig:
    dim: int = 1
    rule: str = "frolov"  # frolov, fibonacci, or gauss
    modifier: str = "none"  # none, cov, or periodize
    kernel: str = "psi_k"  # psi_k or cinf (cov only)
    kernel_k: int = 5
    delta: float = DEFAULT_DELTA
    fn: str = "exp"

    a_min: float = 128.0
    a_max: float = 131072.0
    steps: int = 11

    error_floor: float = 1e-12
    use_envelope: bool = False

    executor: str = "serial"  # serial or ray
    num_workers: int = 4
    use_tqdm: bool = False

    out: Optional[str] = None
    format: str = "csv"  # csv or json

    wandb_config: dict = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"Unknown rule {self.rule}. Expected one of {RULES}.")
        if self.modifier not in MODIFIERS:
            raise ValueError(f"Unknown modifier {self.modifier}. Expected one of {MODIFIERS}.")
        if self.kernel not in KERNELS:
            raise ValueError(f"Unknown kernel {self.kernel}. Expected one of {KERNELS}.")
        if self.executor not in EXECUTORS:
            raise ValueError(f"Unknown executor {self.executor}. Expected one of {EXECUTORS}.")
        if self.format not in FORMATS:
            raise ValueError(f"Unknown format {self.format}. Expected one of {FORMATS}.")
        if not 1 <= self.dim <= 3:
            raise ValueError(f"Sweeps support dimensions 1 to 3, got {self.dim}.")
        if self.rule == "fibonacci" and self.dim != 2:
            raise ValueError(f"The Fibonacci rule is two-dimensional, got dim={self.dim}.")
        if not 1 < self.a_min <= self.a_max:
            raise ValueError(f"Need 1 < a_min <= a_max, got a_min={self.a_min}, a_max={self.a_max}.")
        if self.steps < 1:
            raise ValueError(f"Need at least one sweep step, got {self.steps}.")

    @property
    def use_wandb(self) -> bool:
        return self.wandb_config is not None

    def asdict(self) -> dict:
        d = asdict(self)
        del d["wandb_config"]
        return d

    @classmethod
    def from_json(cls, path: str, **overrides) -> "SweepConfig":
        """Load a config file with the same keys as the bench flags. Overrides that are not
        None take precedence over the file."""
        with open(path) as f:
            values = json.load(f)

        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"Unknown config keys in {path}: {sorted(unknown)}.")

        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class SeminormConfig:
    dim: int = 1
    j_max: int = None
    lp_grid: int = None
    quad_points: int = 4
    use_tqdm: bool = False

    def __post_init__(self):
        if self.j_max is None:
            if self.dim not in DEFAULT_J_MAX:
                raise ValueError(f"No default j_max for dimension {self.dim}; pass one explicitly.")
            self.j_max = DEFAULT_J_MAX[self.dim]
        if self.lp_grid is None:
            self.lp_grid = 2 ** (self.j_max + 2)

    def refined(self, steps: int = 1) -> "SeminormConfig":
        """One refinement step raises j_max by one and doubles the L_p grid."""
        return SeminormConfig(
            dim=self.dim,
            j_max=self.j_max + steps,
            lp_grid=self.lp_grid * 2**steps,
            quad_points=self.quad_points,
            use_tqdm=self.use_tqdm,
        )

    def grids(self) -> dict:
        return dict(
            j_max=self.j_max,
            lp_grid=self.lp_grid,
            quad_points=self.quad_points,
            use_tqdm=self.use_tqdm,
        )

    def asdict(self) -> dict:
        return asdict(self)
