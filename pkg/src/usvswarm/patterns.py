"""Open-loop search patterns driven while a USV senses no target.

Each step function takes the pattern state, the current position and the
speed budget and returns ``(velocity, new_state)``. Patterns that need
randomness take the run's :class:`~usvswarm.core.RngStream` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from .core import ZERO, Bounds, PatternKind, RngStream, Strategy, Vec2, cap_magnitude

SPIRAL_B = 0.5
SPIRAL_DTHETA = 0.3
CLUSTER_JITTER_GAIN = 0.2

MIXED_ORDER = (PatternKind.RANDOM_WALK, PatternKind.SPIRAL, PatternKind.LAWNMOWER, PatternKind.CLUSTER)


@dataclass(frozen=True)
class RandomWalkState:
    heading: float = 0.0
    kind = PatternKind.RANDOM_WALK


@dataclass(frozen=True)
class SpiralState:
    anchor: Vec2
    theta: float = 0.0
    b: float = SPIRAL_B
    dtheta: float = SPIRAL_DTHETA
    kind = PatternKind.SPIRAL


@dataclass(frozen=True)
class LawnmowerState:
    assigned_strip: Bounds
    lane_spacing: float
    lane_index: int = 0
    direction: int = 1
    # True while on the short leg between the end of one lane and the next
    turning: bool = False
    kind = PatternKind.LAWNMOWER

    @property
    def n_lanes(self) -> int:
        return int(math.floor(self.assigned_strip.height / self.lane_spacing + 1e-9)) + 1

    def lane_y(self, lane: int) -> float:
        return self.assigned_strip.min.y + lane * self.lane_spacing

    def waypoint(self) -> Vec2:
        s = self.assigned_strip
        return Vec2(s.max.x if self.direction > 0 else s.min.x, self.lane_y(self.lane_index))


@dataclass(frozen=True)
class ClusterState:
    center: Vec2
    jitter_gain: float = CLUSTER_JITTER_GAIN
    kind = PatternKind.CLUSTER


PatternState = Union[RandomWalkState, SpiralState, LawnmowerState, ClusterState]


def _toward(target: Vec2, x: Vec2, speed: float) -> Vec2:
    return cap_magnitude(target - x, speed)


def random_walk_step(state: RandomWalkState, x: Vec2, speed: float, rng: RngStream):
    h = rng.uniform(0.0, 2.0 * math.pi)
    return Vec2.polar(speed, h), replace(state, heading=h)


def spiral_waypoint(state: SpiralState) -> Vec2:
    r = state.b * state.theta
    return state.anchor + Vec2.polar(r, state.theta)


def spiral_step(state: SpiralState, x: Vec2, speed: float):
    """Head for the next Archimedean waypoint.

    The angle advances by ``dtheta`` once the current waypoint is within one
    step; otherwise the USV keeps closing on it. Far from the anchor the
    waypoints are spaced wider than a step, and advancing every call would
    leave the USV circling near the anchor instead of expanding.
    """
    if (spiral_waypoint(state) - x).norm() > speed:
        return _toward(spiral_waypoint(state), x, speed), state
    new = replace(state, theta=state.theta + state.dtheta)
    return _toward(spiral_waypoint(new), x, speed), new


def lawnmower_step(state: LawnmowerState, x: Vec2, speed: float):
    """Boustrophedon sweep of the assigned strip.

    Lanes run along x at ``min.y + lane_index * lane_spacing``. Reaching the
    end of a lane starts a turn leg up to the next lane at the same x; reaching
    that point flips the direction. After the last lane the sweep wraps to
    lane 0.
    """
    wp = state.waypoint()
    if (wp - x).norm() <= speed:
        if state.turning:
            state = replace(state, turning=False, direction=-state.direction)
        else:
            nxt = state.lane_index + 1
            if nxt >= state.n_lanes:
                nxt = 0
            state = replace(state, turning=True, lane_index=nxt)
        wp = state.waypoint()
    return _toward(wp, x, speed), state


def cluster_step(state: ClusterState, x: Vec2, speed: float, rng: RngStream):
    h = rng.uniform(0.0, 2.0 * math.pi)
    d = state.center - x
    dist = d.norm()
    pull = d * (min(speed, dist) / dist) if dist > 0 else ZERO
    return pull + Vec2.polar(state.jitter_gain * speed, h), state


def pattern_step(state: PatternState, x: Vec2, speed: float, rng: RngStream):
    if isinstance(state, RandomWalkState):
        return random_walk_step(state, x, speed, rng)
    if isinstance(state, SpiralState):
        return spiral_step(state, x, speed)
    if isinstance(state, LawnmowerState):
        return lawnmower_step(state, x, speed)
    if isinstance(state, ClusterState):
        return cluster_step(state, x, speed, rng)
    raise TypeError(f"unknown pattern state {state!r}")


def strip_partition(bounds: Bounds, n: int) -> list[Bounds]:
    """Split ``bounds`` into ``n`` equal-width vertical strips, left to right."""
    w = bounds.width / n
    strips = []
    for j in range(n):
        lo = bounds.min.x + j * w
        hi = bounds.max.x if j == n - 1 else bounds.min.x + (j + 1) * w
        strips.append(Bounds(Vec2(lo, bounds.min.y), Vec2(hi, bounds.max.y)))
    return strips


def pattern_kinds(strategy: Strategy, n: int) -> list[PatternKind]:
    strategy = Strategy(strategy)
    if strategy is Strategy.MIXED:
        return [MIXED_ORDER[i % 4] for i in range(n)]
    return [PatternKind(strategy.value)] * n


def assign_patterns(
    strategy: Strategy,
    n: int,
    bounds: Bounds,
    rng: RngStream,
    positions: Optional[Sequence[Vec2]] = None,
    sensing_radii: Optional[Sequence[float]] = None,
) -> list[PatternState]:
    """Build the initial pattern state of each of ``n`` USVs.

    Spiral anchors are the USVs' initial ``positions``; lawnmower USVs share
    the arena in equal vertical strips with lane spacing equal to their
    sensing radius, starting on the lane nearest their initial y; cluster USVs all aim for the arena centre. Mixed deals
    the four kinds out round-robin by id. Random-walk headings are drawn
    from ``rng`` in id order.
    """
    if n < 1:
        raise ValueError("need at least one USV")
    if positions is None:
        positions = [bounds.center] * n
    if sensing_radii is None:
        sensing_radii = [min(bounds.width, bounds.height) / 10.0] * n
    kinds = pattern_kinds(strategy, n)
    mowers = [i for i, k in enumerate(kinds) if k is PatternKind.LAWNMOWER]
    strips = dict(zip(mowers, strip_partition(bounds, len(mowers)))) if mowers else {}
    out: list[PatternState] = []
    for i, kind in enumerate(kinds):
        if kind is PatternKind.RANDOM_WALK:
            out.append(RandomWalkState(heading=rng.uniform(0.0, 2.0 * math.pi)))
        elif kind is PatternKind.SPIRAL:
            out.append(SpiralState(anchor=positions[i]))
        elif kind is PatternKind.LAWNMOWER:
            st = LawnmowerState(assigned_strip=strips[i], lane_spacing=float(sensing_radii[i]))
            lane = int(round((positions[i].y - st.assigned_strip.min.y) / st.lane_spacing))
            st = replace(st, lane_index=min(max(lane, 0), st.n_lanes - 1))
            out.append(st)
        else:
            out.append(ClusterState(center=bounds.center))
    return out
