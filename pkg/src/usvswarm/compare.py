"""Multi-seed comparison of search strategies on a shared scenario."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import InvalidParam, ScenarioConfig, Strategy, validate_config, with_overrides
from .engine import run


@dataclass(frozen=True)
class ComparisonSpec:
    base: ScenarioConfig
    strategies: tuple[Strategy, ...]
    n_seeds: int = 10
    seed_base: int = 0

    def __post_init__(self):
        if self.n_seeds < 1:
            raise InvalidParam("seeds", "must be >= 1")
        if not self.strategies:
            raise InvalidParam("strategies", "must be nonempty")
        if len(set(self.strategies)) != len(self.strategies):
            raise InvalidParam("strategies", "duplicate strategy")


def parse_strategies(text: str) -> tuple[Strategy, ...]:
    out = []
    valid = {s.value.lower(): s for s in Strategy}
    for part in text.split(","):
        key = part.strip().lower()
        if key not in valid:
            raise InvalidParam("strategies", f"unknown strategy {part.strip()!r}; valid: {', '.join(s.value for s in Strategy)}")
        out.append(valid[key])
    return tuple(out)


def padded_series(values: Sequence[Optional[float]], length: int) -> np.ndarray:
    """A run's series as floats, carried forward to ``length`` if it stopped early.

    Missing values (``None``) become NaN.
    """
    arr = np.array([np.nan if v is None else v for v in values], dtype=float)
    if len(arr) < length:
        arr = np.concatenate([arr, np.full(length - len(arr), arr[-1])])
    return arr


def _one(args) -> np.ndarray:
    cfg, length = args
    return padded_series(run(cfg).series("avg_min_dist"), length)


@dataclass
class ComparisonResult:
    t: np.ndarray
    mean: dict[Strategy, np.ndarray]
    std: dict[Strategy, np.ndarray]
    per_run: dict[Strategy, np.ndarray]  # [seed, t]

    def final_means(self) -> dict[Strategy, float]:
        return {s: float(m[-1]) for s, m in self.mean.items()}


def run_comparison(spec: ComparisonSpec, jobs: int = 1) -> ComparisonResult:
    """Run every (strategy, seed) pair and reduce pointwise in ``t``.

    Seeds are ``seed_base + j``. Results are reduced in fixed strategy/seed
    order, so ``jobs`` never changes the output.
    """
    base = validate_config(spec.base)
    length = base.apso.total_iterations + 1
    grid = [
        (with_overrides(base, pattern_strategy=s, seed=spec.seed_base + j), length)
        for s in spec.strategies
        for j in range(spec.n_seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_one, grid))
    else:
        rows = [_one(a) for a in grid]
    per_run, mean, std = {}, {}, {}
    for n, s in enumerate(spec.strategies):
        block = np.stack(rows[n * spec.n_seeds:(n + 1) * spec.n_seeds])
        per_run[s] = block
        mean[s] = block.mean(axis=0)
        std[s] = block.std(axis=0, ddof=1) if spec.n_seeds > 1 else np.zeros(length)
    return ComparisonResult(np.arange(length), mean, std, per_run)
