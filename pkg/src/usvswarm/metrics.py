"""Per-iteration metrics, coverage bookkeeping and run summaries.

``exploration`` and ``exploitation`` are proxies: mean distance to the swarm
centroid, and mean distance of each USV from its own personal best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .apso import inertia_weight
from .core import Bounds, SwarmError, UsvState, distance

METRIC_COLUMNS = ("t", "omega", "avg_speed", "avg_min_dist", "coverage", "exploration", "exploitation")


class EmptySeries(SwarmError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    t: int
    omega: float
    avg_speed: float
    avg_min_dist: Optional[float]
    coverage: float
    exploration: float
    exploitation: Optional[float]


@dataclass(frozen=True)
class CoverageGrid:
    cells_per_axis: int
    visited: np.ndarray
    bounds: Bounds

    @classmethod
    def empty(cls, bounds: Bounds, cells_per_axis: int) -> CoverageGrid:
        return cls(cells_per_axis, np.zeros((cells_per_axis, cells_per_axis), dtype=bool), bounds)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Centre x and y of every cell, indexed ``[ix, iy]``."""
        n = self.cells_per_axis
        b = self.bounds
        wx = (b.max.x - b.min.x) / n
        wy = (b.max.y - b.min.y) / n
        cx = b.min.x + (np.arange(n) + 0.5) * wx
        cy = b.min.y + (np.arange(n) + 0.5) * wy
        return np.meshgrid(cx, cy, indexing="ij")

    @property
    def fraction(self) -> float:
        return float(self.visited.mean())


def coverage_update(grid: CoverageGrid, usvs: Sequence[UsvState]) -> CoverageGrid:
    """Mark every cell whose centre lies inside some USV's sensing disk."""
    cx, cy = grid.cell_centers()
    visited = grid.visited.copy()
    for u in usvs:
        dx = cx - u.position.x
        dy = cy - u.position.y
        visited |= dx * dx + dy * dy <= u.sensing_radius * u.sensing_radius
    return CoverageGrid(grid.cells_per_axis, visited, grid.bounds)


def avg_min_dist(usv_xy: np.ndarray, target_xy: np.ndarray) -> Optional[float]:
    if len(target_xy) == 0:
        return None
    d = np.hypot(target_xy[:, None, 0] - usv_xy[None, :, 0], target_xy[:, None, 1] - usv_xy[None, :, 1])
    return float(d.min(axis=1).mean())


def exploration(usv_xy: np.ndarray) -> float:
    c = usv_xy.mean(axis=0)
    return float(np.hypot(usv_xy[:, 0] - c[0], usv_xy[:, 1] - c[1]).mean())


def exploitation(usvs: Sequence[UsvState]) -> Optional[float]:
    d = [distance(u.position, u.personal_best_pos) for u in usvs if u.personal_best_fitness is not None]
    if not d:
        return None
    return float(np.mean(d))


def record(s: Any, grid: CoverageGrid) -> MetricsRecord:
    """Snapshot the metrics of simulation state ``s`` (a ``SimState``)."""
    usv_xy = np.array([u.position.as_tuple() for u in s.usvs], dtype=float)
    tgt_xy = np.array([tg.position.as_tuple() for tg in s.targets], dtype=float).reshape(-1, 2)
    speeds = [u.velocity.norm() for u in s.usvs]
    return MetricsRecord(
        t=s.t,
        omega=inertia_weight(s.t, s.config.apso),
        avg_speed=float(np.mean(speeds)),
        avg_min_dist=avg_min_dist(usv_xy, tgt_xy),
        coverage=grid.fraction,
        exploration=exploration(usv_xy),
        exploitation=exploitation(s.usvs),
    )


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation; 0 when either side has no spread."""
    if len(x) < 2:
        return 0.0
    rx = rankdata(x)
    ry = rankdata(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    den = math.sqrt(float((rx * rx).sum()) * float((ry * ry).sum()))
    if den == 0.0:
        return 0.0
    return float((rx * ry).sum()) / den


def tail(series: Sequence[Any], fraction: float = 0.8) -> Sequence[Any]:
    """The last ``fraction`` of ``series``."""
    start = int(math.floor(len(series) * (1.0 - fraction) + 1e-9))
    return series[start:]


@dataclass(frozen=True)
class RunSummary:
    iterations: int
    initial_avg_min_dist: Optional[float]
    final_avg_min_dist: Optional[float]
    final_over_initial: Optional[float]
    min_avg_min_dist: Optional[float]
    mean_avg_min_dist: Optional[float]
    final_coverage: float
    converged_at: Optional[int]
    speed_trend_spearman: float
    wall_time_s: Optional[float] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def summarize(series: Sequence[MetricsRecord], trace: Any = None, wall_time_s: Optional[float] = None) -> RunSummary:
    """Reduce a metrics series to its run-level scalars.

    ``mean_avg_min_dist`` is the tracking-accuracy figure (lower is better).
    The speed trend is the rank correlation of ``t`` with ``avg_speed`` over
    the last 80% of the series.
    """
    if not series:
        raise EmptySeries("cannot summarise an empty metrics series")
    dists = [r.avg_min_dist for r in series if r.avg_min_dist is not None]
    first, last = series[0].avg_min_dist, series[-1].avg_min_dist
    ratio = None
    if first is not None and last is not None and first > 0:
        ratio = last / first
    late = tail(series)
    return RunSummary(
        iterations=series[-1].t,
        initial_avg_min_dist=first,
        final_avg_min_dist=last,
        final_over_initial=ratio,
        min_avg_min_dist=min(dists) if dists else None,
        mean_avg_min_dist=float(np.mean(dists)) if dists else None,
        final_coverage=series[-1].coverage,
        converged_at=getattr(trace, "converged_at", None),
        speed_trend_spearman=spearman([r.t for r in late], [r.avg_speed for r in late]),
        wall_time_s=wall_time_s,
    )
