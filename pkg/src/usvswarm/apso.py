"""APSO-kNN controller kernel.

Pure functions: linear inertia schedule, k-nearest-neighbour selection,
the two velocity laws (global-best and kNN-centroid social terms), the
capped/clamped position update, fitness, best tracking and the
convergence test. Randomness (``r1``, ``r2``) is always passed in.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .core import ApsoParams, Bounds, InvalidParam, SwarmError, UsvState, Vec2, cap_magnitude, distance

# Fitness value for a USV that senses nothing.
UNDETECTED = None


class EmptyNeighborhood(SwarmError):
    pass


class NoTargets(SwarmError):
    pass


class MissingHistory(SwarmError):
    pass


@dataclass(frozen=True)
class GlobalBest:
    position: Vec2
    fitness: float
    prev_position: Optional[Vec2] = None


def inertia_weight(t: int, p: ApsoParams) -> float:
    """omega_max at t=0 falling linearly to omega_min at t=T, then held."""
    T = p.total_iterations
    if t >= T:
        return p.omega_min
    if t <= 0:
        return p.omega_max
    return p.omega_max - (p.omega_max - p.omega_min) * t / T


def knn_neighbors(i: int, positions: Sequence[Vec2], k: int) -> list[int]:
    """Indices of the ``k`` positions closest to ``positions[i]``, excluding ``i``.

    Ties in distance go to the lower index. Returned nearest first.
    """
    n = len(positions)
    if k >= n:
        raise InvalidParam("k", f"need k <= {n - 1} for {n} positions, got {k}")
    if k < 0:
        raise InvalidParam("k", "must be non-negative")
    xy = np.array([(p.x, p.y) for p in positions], dtype=float)
    d2 = (xy[:, 0] - xy[i, 0]) ** 2 + (xy[:, 1] - xy[i, 1]) ** 2
    d2[i] = np.inf
    order = np.argsort(d2, kind="stable")
    return [int(j) for j in order[:k]]


def _pso_velocity(
    v: Vec2, x: Vec2, pbest: Vec2, social: Vec2, omega: float, p: ApsoParams, r1: float, r2: float
) -> Vec2:
    cx = p.c1 * r1
    sx = p.c2 * r2
    return Vec2(
        omega * v.x + cx * (pbest.x - x.x) + sx * (social.x - x.x),
        omega * v.y + cx * (pbest.y - x.y) + sx * (social.y - x.y),
    )


def velocity_update_global(usv: UsvState, g: Vec2, t: int, p: ApsoParams, r1: float, r2: float) -> Vec2:
    """Standard PSO velocity with the swarm global best as the social pull.

    The result is uncapped; :func:`position_update` applies ``v_max``.
    """
    return _pso_velocity(usv.velocity, usv.position, usv.personal_best_pos, g, inertia_weight(t, p), p, r1, r2)


def centroid(points: Sequence[Vec2]) -> Vec2:
    sx = sum(q.x for q in points)
    sy = sum(q.y for q in points)
    return Vec2(sx / len(points), sy / len(points))


def velocity_update_knn(
    usv: UsvState, neighbor_positions: Sequence[Vec2], t: int, p: ApsoParams, r1: float, r2: float
) -> Vec2:
    """PSO velocity whose social pull is the mean position of the neighbours."""
    if not neighbor_positions:
        raise EmptyNeighborhood("velocity_update_knn needs at least one neighbour")
    c = centroid(neighbor_positions)
    return _pso_velocity(usv.velocity, usv.position, usv.personal_best_pos, c, inertia_weight(t, p), p, r1, r2)


def position_update(x: Vec2, v_raw: Vec2, p: ApsoParams, b: Bounds) -> tuple[Vec2, Vec2]:
    """Cap speed at ``v_max``, step, and clamp to the arena.

    A velocity component is zeroed on any axis where the step had to be
    clamped, so a USV pressed against a wall does not keep pushing into it.
    """
    v = cap_magnitude(v_raw, p.v_max)
    nx, ny = x.x + v.x, x.y + v.y
    vx, vy = v.x, v.y
    if nx < b.min.x or nx > b.max.x:
        nx = min(max(nx, b.min.x), b.max.x)
        vx = 0.0
    if ny < b.min.y or ny > b.max.y:
        ny = min(max(ny, b.min.y), b.max.y)
        vy = 0.0
    return Vec2(nx, ny), Vec2(vx, vy)


def fitness(x: Vec2, targets: Sequence[Vec2], sensing_radius: float) -> Optional[float]:
    """Distance to the nearest target, or ``UNDETECTED`` if it is out of range."""
    if not targets:
        raise NoTargets("fitness needs at least one target")
    dmin = min(distance(x, tg) for tg in targets)
    return dmin if dmin <= sensing_radius else UNDETECTED


def update_personal_best(usv: UsvState, f: Optional[float]) -> UsvState:
    if f is UNDETECTED:
        return usv
    if usv.personal_best_fitness is UNDETECTED or f < usv.personal_best_fitness:
        return replace(usv, personal_best_pos=usv.position, personal_best_fitness=f)
    return usv


def update_global_best(usvs: Sequence[UsvState], g: Optional[GlobalBest]) -> Optional[GlobalBest]:
    """Arg-min over detected personal bests, lowest id on ties.

    ``prev_position`` records where the best was before it last moved; a
    call that selects the same best returns ``g`` unchanged.
    """
    best = None
    for u in usvs:
        f = u.personal_best_fitness
        if f is UNDETECTED:
            continue
        if best is None or f < best.personal_best_fitness:
            best = u
    if best is None:
        return g
    if g is None:
        return GlobalBest(best.personal_best_pos, best.personal_best_fitness)
    if best.personal_best_pos == g.position:
        if best.personal_best_fitness == g.fitness:
            return g
        return GlobalBest(g.position, best.personal_best_fitness, g.prev_position)
    return GlobalBest(best.personal_best_pos, best.personal_best_fitness, prev_position=g.position)


def has_converged(g: GlobalBest, epsilon: float) -> bool:
    if g.prev_position is None:
        raise MissingHistory("global best has no previous position yet")
    return distance(g.position, g.prev_position) < epsilon
