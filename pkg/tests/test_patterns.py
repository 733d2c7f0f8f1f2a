import math
from collections import Counter

import pytest

from usvswarm.core import DEFAULT_BOUNDS, Bounds, PatternKind, RngStream, Strategy, Vec2
from usvswarm.patterns import (
    ClusterState,
    LawnmowerState,
    RandomWalkState,
    SpiralState,
    assign_patterns,
    cluster_step,
    lawnmower_step,
    pattern_kinds,
    random_walk_step,
    spiral_step,
    spiral_waypoint,
)


class FixedRng:
    """Stand-in stream returning a scripted value for every uniform draw."""

    def __init__(self, value):
        self.value = value

    def uniform(self, low, high):
        return self.value

    def random(self):
        return self.value


def test_random_walk_forced_heading():
    v, st = random_walk_step(RandomWalkState(), Vec2(5, 5), 2.0, FixedRng(0.0))
    assert v == Vec2(2.0, 0.0) and st.heading == 0.0


def test_random_walk_magnitude_and_determinism():
    a, b = RngStream(11), RngStream(11)
    sa = sb = RandomWalkState()
    for _ in range(50):
        va, sa = random_walk_step(sa, Vec2(0, 0), 2.0, a)
        vb, sb = random_walk_step(sb, Vec2(0, 0), 2.0, b)
        assert va == vb
        assert va.norm() == pytest.approx(2.0, abs=1e-12)


def test_spiral_waypoint_direction():
    st = SpiralState(anchor=Vec2(0, 0), b=1.0, dtheta=math.pi / 2)
    v, st2 = spiral_step(st, Vec2(0, 0), 100.0)
    assert st2.theta == math.pi / 2
    assert v.x == pytest.approx(0.0, abs=1e-12) and v.y == pytest.approx(math.pi / 2)


def test_spiral_angle_advances_on_arrival_and_radii_grow():
    st = SpiralState(anchor=Vec2(50, 50))
    x = Vec2(50, 50)
    thetas, radii = [st.theta], []
    for _ in range(300):
        v, nxt = spiral_step(st, x, 2.0)
        if nxt.theta != st.theta:
            assert nxt.theta == pytest.approx(st.theta + st.dtheta)
            radii.append((spiral_waypoint(nxt) - nxt.anchor).norm())
        thetas.append(nxt.theta)
        st, x = nxt, x + v
    assert all(b >= a for a, b in zip(thetas, thetas[1:]))
    assert all(b > a for a, b in zip(radii, radii[1:]))
    # the USV actually expands outward
    assert (x - Vec2(50, 50)).norm() > 10


def test_lawnmower_schedule():
    st = LawnmowerState(assigned_strip=DEFAULT_BOUNDS, lane_spacing=10.0)
    assert st.waypoint() == Vec2(100, 0)
    v, st = lawnmower_step(st, Vec2(50, 0), 2.0)
    assert v == Vec2(2.0, 0.0)
    v, st = lawnmower_step(st, Vec2(99, 0), 2.0)
    assert st.waypoint() == Vec2(100, 10) and st.turning
    v, st = lawnmower_step(st, Vec2(100, 9), 2.0)
    assert st.direction == -1 and st.waypoint() == Vec2(0, 10)


def test_lawnmower_lanes_increase_until_wrap():
    strip = Bounds(Vec2(0, 0), Vec2(25, 100))
    st = LawnmowerState(assigned_strip=strip, lane_spacing=10.0)
    x = Vec2(0, 0)
    lanes = [st.lane_index]
    for _ in range(2000):
        v, st = lawnmower_step(st, x, 2.0)
        x = x + v
        if st.lane_index != lanes[-1]:
            lanes.append(st.lane_index)
    first_wrap = lanes.index(0, 1)
    assert lanes[:first_wrap] == list(range(first_wrap))
    assert [st.lane_y(i + 1) - st.lane_y(i) for i in range(3)] == [10.0] * 3


def test_cluster_examples():
    st = ClusterState(center=Vec2(0, 0), jitter_gain=0.0)
    v, _ = cluster_step(st, Vec2(2, 0), 1.0, RngStream(0))
    assert v == Vec2(-1.0, 0.0)
    v, _ = cluster_step(st, Vec2(0, 0), 1.0, RngStream(0))
    assert v.norm() == 0.0
    rng = RngStream(5)
    for i in range(200):
        v, _ = cluster_step(ClusterState(center=Vec2(50, 50)), Vec2(i % 100, 3.0), 1.0, rng)
        assert v.norm() <= 1.2 + 1e-12


def test_mixed_group_sizes():
    assert sorted(Counter(pattern_kinds(Strategy.MIXED, 20)).values()) == [5, 5, 5, 5]
    c = Counter(pattern_kinds(Strategy.MIXED, 6))
    order = [PatternKind.RANDOM_WALK, PatternKind.SPIRAL, PatternKind.LAWNMOWER, PatternKind.CLUSTER]
    assert [c[k] for k in order] == [2, 2, 1, 1]


def test_lawnmower_strips():
    states = assign_patterns(Strategy.LAWNMOWER, 4, DEFAULT_BOUNDS, RngStream(0))
    widths = [s.assigned_strip.width for s in states]
    assert widths == [25.0] * 4
    assert [s.assigned_strip.min.x for s in states] == [0.0, 25.0, 50.0, 75.0]
