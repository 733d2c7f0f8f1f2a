"""Per-iteration orchestration of USVs and targets.

One iteration, in fixed order:

1. each USV (ascending id) re-scores its remembered best against the
   current target positions, then senses and, on contact, updates the best;
2. a USV holding a valid best takes a PSO velocity (global-best or
   kNN-centroid social term, kNN over the whole swarm's pre-move
   positions); any other USV takes its search-pattern velocity;
3. every USV is capped and clamped into the arena;
4. the global best is refreshed;
5. targets move (evaders react to the post-move USV positions);
6. ``t`` advances.

A best stays valid while some target is within the USV's sensing radius of
it, so a USV keeps tracking after a target briefly leaves its own disk and
returns to searching once the target has moved away from the remembered
spot.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import apso
from .apso import GlobalBest, has_converged, knn_neighbors, position_update
from .core import (
    ZERO,
    RngStream,
    SocialMode,
    SwarmError,
    TargetMode,
    UsvState,
    ValidatedConfig,
    Vec2,
    distance,
    resolve_sensing_radii,
    validate_config,
)
from .metrics import CoverageGrid, MetricsRecord, RunSummary, coverage_update, record, summarize
from .patterns import assign_patterns, pattern_step
from .targets import TargetState, evasion_step, smooth_random_step, static_step


class StepAfterTermination(SwarmError):
    pass


@dataclass(frozen=True)
class SimState:
    """World snapshot at iteration ``t``.

    ``rng`` is the run's single stream and is advanced by :func:`step`;
    ``tracking[i]`` says whether USV ``i`` was driven by the PSO law (True)
    or by its search pattern (False) on the step that produced this state.
    """

    t: int
    usvs: tuple[UsvState, ...]
    targets: tuple[TargetState, ...]
    global_best: Optional[GlobalBest]
    rng: RngStream
    config: ValidatedConfig
    tracking: tuple[bool, ...] = ()
    converged: bool = False


def initialize(config: ValidatedConfig, search_only: bool = False) -> SimState:
    """Place USVs and targets uniformly in the arena and assign patterns.

    Draw order: USV positions by id, sensing radii, each target's position
    and heading by id, then pattern draws. Patterns come last so every
    strategy sees the same starting world for a given seed. ``search_only`` builds a world
    with no targets, for pure coverage studies.
    """
    config = validate_config(config)
    rng = RngStream(config.seed)
    b = config.bounds
    positions = [Vec2(rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y)) for _ in range(config.n_usvs)]
    radii = resolve_sensing_radii(config, rng)
    tb = config.target_behavior
    speed = {TargetMode.STATIC: 0.0, TargetMode.SMOOTH_RANDOM: tb.speed, TargetMode.PURSUIT_EVASION: tb.alpha}[tb.mode]
    targets = []
    if not search_only:
        for j in range(config.n_targets):
            p = Vec2(rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y))
            targets.append(TargetState(j, p, rng.heading(), speed))
    patterns = assign_patterns(config.pattern_strategy, config.n_usvs, b, rng, positions, radii)
    usvs = tuple(
        UsvState(i, positions[i], ZERO, positions[i], None, radii[i], patterns[i]) for i in range(config.n_usvs)
    )
    return SimState(0, usvs, tuple(targets), None, rng, config, tracking=(False,) * config.n_usvs)


def sense(usv: UsvState, targets: Sequence[TargetState]) -> list[int]:
    """Indices of targets inside the closed sensing disk, nearest first."""
    hits = []
    for j, tg in enumerate(targets):
        d = distance(usv.position, tg.position)
        if d <= usv.sensing_radius:
            hits.append((d, j))
    hits.sort()
    return [j for _, j in hits]


def refresh_personal_best(usv: UsvState, target_pos: Sequence[Vec2]) -> UsvState:
    """Re-score the remembered best against where the targets are now.

    The memory is dropped (fitness back to ``None``) once no target lies
    within sensing range of the remembered position.
    """
    if not target_pos:
        return replace(usv, personal_best_fitness=None)
    return replace(usv, personal_best_fitness=apso.fitness(usv.personal_best_pos, target_pos, usv.sensing_radius))


def _step_target(tg: TargetState, s: SimState, usv_positions: list[Vec2]) -> TargetState:
    tb = s.config.target_behavior
    if tb.mode is TargetMode.STATIC:
        return static_step(tg)
    if tb.mode is TargetMode.SMOOTH_RANDOM:
        return smooth_random_step(tg, s.t, tb, s.config.bounds, s.rng)
    return evasion_step(tg, usv_positions, tb.alpha, s.config.bounds, s.rng, tb.use_printed_eq8_sign)


def step(s: SimState) -> SimState:
    cfg = s.config
    p = cfg.apso
    if s.t >= p.total_iterations or s.converged:
        raise StepAfterTermination(f"run already ended at t={s.t}")
    rng = s.rng
    positions = [u.position for u in s.usvs]
    target_pos = [tg.position for tg in s.targets]

    raw_v: list[Vec2] = []
    usvs: list[UsvState] = []
    tracking: list[bool] = []
    for i, u in enumerate(s.usvs):
        if u.personal_best_fitness is not None:
            u = refresh_personal_best(u, target_pos)
        if sense(u, s.targets):
            u = apso.update_personal_best(u, apso.fitness(u.position, target_pos, u.sensing_radius))
        if u.personal_best_fitness is not None:
            r1, r2 = rng.random(), rng.random()
            if cfg.social_mode is SocialMode.KNN_CENTROID:
                nbrs = knn_neighbors(i, positions, p.k)
                v = apso.velocity_update_knn(u, [positions[j] for j in nbrs], s.t, p, r1, r2)
            else:
                g = s.global_best.position if s.global_best is not None else u.personal_best_pos
                v = apso.velocity_update_global(u, g, s.t, p, r1, r2)
            tracking.append(True)
        else:
            v, pat = pattern_step(u.pattern, u.position, p.v_max, rng)
            u = replace(u, pattern=pat)
            tracking.append(False)
        usvs.append(u)
        raw_v.append(v)

    for i, u in enumerate(usvs):
        x, v = position_update(u.position, raw_v[i], p, cfg.bounds)
        usvs[i] = replace(u, position=x, velocity=v)

    g = apso.update_global_best(usvs, s.global_best)
    converged = g is not None and g.prev_position is not None and has_converged(g, p.epsilon)

    moved = [u.position for u in usvs]
    targets = tuple(_step_target(tg, s, moved) for tg in s.targets)
    return SimState(s.t + 1, tuple(usvs), targets, g, rng, cfg, tuple(tracking), converged)


@dataclass
class SimTrace:
    """Everything a run produced, one row per snapshot ``t = 0 .. end``.

    Target velocities are realised displacements since the previous
    snapshot (zero at ``t = 0``).
    """

    usv_positions: np.ndarray
    usv_velocities: np.ndarray
    target_positions: np.ndarray
    target_velocities: np.ndarray
    tracking: np.ndarray
    metrics: list[MetricsRecord]
    pattern_kinds: list[str]
    converged_at: Optional[int] = None
    summary: Optional[RunSummary] = None
    final_state: Optional[SimState] = field(default=None, repr=False)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.metrics])

    def series(self, name: str) -> list:
        return [getattr(r, name) for r in self.metrics]


def run(config: ValidatedConfig, search_only: bool = False) -> SimTrace:
    """Step until ``T`` or until the global best stops moving by ``epsilon``."""
    started = time.perf_counter()
    state = initialize(config, search_only)
    cfg = state.config
    grid = coverage_update(CoverageGrid.empty(cfg.bounds, cfg.coverage_grid_cells), state.usvs)
    metrics = [record(state, grid)]
    snaps = [state]
    converged_at = None
    while state.t < cfg.apso.total_iterations and not state.converged:
        state = step(state)
        grid = coverage_update(grid, state.usvs)
        metrics.append(record(state, grid))
        snaps.append(state)
        if state.converged:
            converged_at = state.t

    n, m = cfg.n_usvs, len(state.targets)
    upos = np.array([[u.position.as_tuple() for u in s.usvs] for s in snaps], dtype=float)
    uvel = np.array([[u.velocity.as_tuple() for u in s.usvs] for s in snaps], dtype=float)
    tpos = np.array([[tg.position.as_tuple() for tg in s.targets] for s in snaps], dtype=float).reshape(len(snaps), m, 2)
    tvel = np.zeros_like(tpos)
    tvel[1:] = tpos[1:] - tpos[:-1]
    tracking = np.array([s.tracking for s in snaps], dtype=bool).reshape(len(snaps), n)
    trace = SimTrace(
        usv_positions=upos,
        usv_velocities=uvel,
        target_positions=tpos,
        target_velocities=tvel,
        tracking=tracking,
        metrics=metrics,
        pattern_kinds=[u.pattern.kind.value for u in state.usvs],
        converged_at=converged_at,
        final_state=state,
    )
    trace.summary = summarize(metrics, trace, wall_time_s=time.perf_counter() - started)
    return trace
