"""Target motion: static, smooth random wandering, and nearest-pursuer evasion."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .core import Bounds, RngStream, SwarmError, TargetBehaviorParams, Vec2

TWO_PI = 2.0 * math.pi


class NoPursuers(SwarmError):
    pass


@dataclass(frozen=True)
class TargetState:
    id: int
    position: Vec2
    heading: float
    speed: float


def static_step(tgt: TargetState) -> TargetState:
    return tgt


def _wrap(h: float) -> float:
    h = math.fmod(h, TWO_PI)
    return h + TWO_PI if h < 0 else h


def smooth_random_step(
    tgt: TargetState, t: int, params: TargetBehaviorParams, bounds: Bounds, rng: RngStream
) -> TargetState:
    """Constant-speed motion with a fresh random heading every ``D`` iterations.

    On leaving the arena the heading is mirrored off the violated wall(s) and
    the position is clamped back inside.
    """
    heading = tgt.heading
    if t > 0 and t % params.direction_change_period == 0:
        heading = rng.uniform(0.0, TWO_PI)
    x = tgt.position.x + tgt.speed * math.cos(heading)
    y = tgt.position.y + tgt.speed * math.sin(heading)
    if x < bounds.min.x or x > bounds.max.x:
        heading = math.pi - heading
    if y < bounds.min.y or y > bounds.max.y:
        heading = -heading
    pos = bounds.clamp(Vec2(x, y))
    return replace(tgt, position=pos, heading=_wrap(heading))


def nearest_index(p: Vec2, others: Sequence[Vec2]) -> int:
    best, best_d = 0, math.inf
    for j, q in enumerate(others):
        d = math.hypot(p.x - q.x, p.y - q.y)
        if d < best_d:
            best, best_d = j, d
    return best


def evasion_step(
    tgt: TargetState,
    usv_positions: Sequence[Vec2],
    alpha: float,
    bounds: Bounds,
    rng: RngStream,
    printed_sign: bool = False,
) -> TargetState:
    """Step ``alpha`` straight away from the nearest USV, then clamp.

    A target sitting exactly on its nearest USV flees along a random heading.
    ``printed_sign=True`` negates the step (the target closes on the USV).
    """
    if not usv_positions:
        raise NoPursuers("evasion needs at least one USV position")
    near = usv_positions[nearest_index(tgt.position, usv_positions)]
    away = tgt.position - near
    d = away.norm()
    if d > 0:
        ux, uy = away.x / d, away.y / d
    else:
        h = rng.uniform(0.0, TWO_PI)
        ux, uy = math.cos(h), math.sin(h)
    if printed_sign:
        ux, uy = -ux, -uy
    pos = bounds.clamp(Vec2(tgt.position.x + alpha * ux, tgt.position.y + alpha * uy))
    return replace(tgt, position=pos, heading=_wrap(math.atan2(uy, ux)))
