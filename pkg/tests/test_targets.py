import math

import pytest

from usvswarm.core import DEFAULT_BOUNDS, RngStream, TargetBehaviorParams, Vec2
from usvswarm.targets import TargetState, evasion_step, smooth_random_step, static_step


def test_smooth_random_heading_constant_within_period():
    rng = RngStream(4)
    p = TargetBehaviorParams(direction_change_period=20)
    tg = TargetState(0, Vec2(50, 50), 0.3, 1.0)
    h0 = tg.heading
    headings = []
    for t in range(40):
        tg = smooth_random_step(tg, t, p, DEFAULT_BOUNDS, rng)
        headings.append(tg.heading)
    # states t=1..20 keep the initial heading; the step taken at t=20 resamples
    assert all(h == h0 for h in headings[:20])
    assert headings[20] != h0
    assert len(set(headings[20:40])) == 1


def test_smooth_random_constant_speed_away_from_walls():
    tg = TargetState(0, Vec2(50, 50), 1.0, 1.0)
    nxt = smooth_random_step(tg, 1, TargetBehaviorParams(), DEFAULT_BOUNDS, RngStream(0))
    assert (nxt.position - tg.position).norm() == pytest.approx(1.0, abs=1e-12)


def test_smooth_random_reflects_off_right_wall():
    tg = TargetState(0, Vec2(99.5, 50), 0.0, 1.0)
    nxt = smooth_random_step(tg, 1, TargetBehaviorParams(), DEFAULT_BOUNDS, RngStream(0))
    assert nxt.heading == pytest.approx(math.pi)
    assert DEFAULT_BOUNDS.contains(nxt.position)


def test_evasion_examples():
    tg = TargetState(0, Vec2(0, 0), 0.0, 1.0)
    big = DEFAULT_BOUNDS.__class__(Vec2(-10, -10), Vec2(10, 10))
    nxt = evasion_step(tg, [Vec2(3, 4)], 1.0, big, RngStream(0))
    assert nxt.position.x == pytest.approx(-0.6) and nxt.position.y == pytest.approx(-0.8)
    nxt = evasion_step(tg, [Vec2(1, 0), Vec2(-1, 0)], 1.0, big, RngStream(0))
    assert nxt.position == Vec2(-1.0, 0.0)
    nxt = evasion_step(tg, [Vec2(0, 0)], 2.5, big, RngStream(9))
    assert nxt.position.norm() == pytest.approx(2.5, abs=1e-12)


def test_evasion_printed_sign_moves_toward():
    tg = TargetState(0, Vec2(50, 50), 0.0, 1.0)
    nxt = evasion_step(tg, [Vec2(53, 54)], 1.0, DEFAULT_BOUNDS, RngStream(0), printed_sign=True)
    assert nxt.position.x == pytest.approx(50.6) and nxt.position.y == pytest.approx(50.8)


def test_static_identity():
    tg = TargetState(3, Vec2(7, 7), 1.2, 0.0)
    s = tg
    for _ in range(100):
        s = static_step(s)
    assert s == tg and s.position == Vec2(7, 7)
