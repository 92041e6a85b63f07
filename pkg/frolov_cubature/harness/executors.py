from abc import ABC
from typing import List, Sequence

import ray
from tqdm import tqdm

from frolov_cubature.config import SweepConfig
from frolov_cubature.harness.sweep import SweepRow, sweep_point


class SweepExecutor(ABC):
    """Evaluates sweep points and returns their rows in sweep order."""

    def run(self, config: SweepConfig, scales: Sequence[float]) -> List[SweepRow]:
        raise NotImplementedError


class SerialSweepExecutor(SweepExecutor):
    def run(self, config: SweepConfig, scales: Sequence[float]) -> List[SweepRow]:
        return [
            sweep_point(config, a)
            for a in tqdm(scales, disable=not config.use_tqdm, desc="sweep")
        ]


@ray.remote
def _ray_sweep_point(config: SweepConfig, a: float) -> SweepRow:
    return sweep_point(config, a)


class RaySweepExecutor(SweepExecutor):
    def __init__(self, num_workers: int = None):
        self.num_workers = num_workers

    def run(self, config: SweepConfig, scales: Sequence[float]) -> List[SweepRow]:
        if not ray.is_initialized():
            ray.init(num_cpus=self.num_workers, ignore_reinit_error=True)

        futures = [_ray_sweep_point.remote(config, float(a)) for a in scales]

        rows = []
        for future in tqdm(futures, disable=not config.use_tqdm, desc="sweep"):
            rows.append(ray.get(future))
        return rows


def make_executor(config: SweepConfig) -> SweepExecutor:
    if config.executor == "ray":
        return RaySweepExecutor(num_workers=config.num_workers)
    return SerialSweepExecutor()
