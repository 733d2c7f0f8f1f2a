"""Domain types, scenario configuration and the seeded random stream.

Everything here is a plain value: frozen dataclasses that can be copied
freely between threads. The single mutable object is :class:`RngStream`,
which is owned by exactly one simulation run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Optional, Union

import numpy as np

TWO_PI = 2.0 * math.pi


class SwarmError(Exception):
    """Base class for every error raised by the package."""


class InvalidParam(SwarmError, ValueError):
    def __init__(self, name: str, reason: str):
        self.name = name
        self.reason = reason
        super().__init__(f"invalid parameter {name!r}: {reason}")


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> Vec2:
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    @classmethod
    def polar(cls, r: float, theta: float) -> Vec2:
        return cls(r * math.cos(theta), r * math.sin(theta))


ZERO = Vec2(0.0, 0.0)


def distance(a: Vec2, b: Vec2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def cap_magnitude(v: Vec2, limit: float) -> Vec2:
    """Scale ``v`` down to length ``limit`` if it is longer, else return it."""
    n = v.norm()
    if n > limit:
        return v * (limit / n)
    return v


@dataclass(frozen=True, slots=True)
class Bounds:
    min: Vec2
    max: Vec2

    def __post_init__(self):
        if not (self.min.is_finite() and self.max.is_finite()):
            raise InvalidParam("bounds", "corners must be finite")
        if not (self.min.x < self.max.x and self.min.y < self.max.y):
            raise InvalidParam("bounds", "min must be strictly below max on both axes")

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def center(self) -> Vec2:
        return Vec2((self.min.x + self.max.x) / 2.0, (self.min.y + self.max.y) / 2.0)

    def contains(self, p: Vec2) -> bool:
        return self.min.x <= p.x <= self.max.x and self.min.y <= p.y <= self.max.y

    def clamp(self, p: Vec2) -> Vec2:
        return Vec2(
            min(max(p.x, self.min.x), self.max.x),
            min(max(p.y, self.min.y), self.max.y),
        )


DEFAULT_BOUNDS = Bounds(Vec2(0.0, 0.0), Vec2(100.0, 100.0))


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------


class PatternKind(str, Enum):
    RANDOM_WALK = "RandomWalk"
    SPIRAL = "Spiral"
    LAWNMOWER = "Lawnmower"
    CLUSTER = "Cluster"


class Strategy(str, Enum):
    RANDOM_WALK = "RandomWalk"
    SPIRAL = "Spiral"
    LAWNMOWER = "Lawnmower"
    CLUSTER = "Cluster"
    MIXED = "Mixed"


class SocialMode(str, Enum):
    GLOBAL_BEST = "GlobalBest"
    KNN_CENTROID = "KnnCentroid"


class TargetMode(str, Enum):
    STATIC = "Static"
    SMOOTH_RANDOM = "SmoothRandom"
    PURSUIT_EVASION = "PursuitEvasion"


# ---------------------------------------------------------------------------
# Random stream
# ---------------------------------------------------------------------------


class RngStream:
    """Seeded uniform stream; PCG64 gives the same doubles on every platform.

    Callers draw in a fixed order (USVs by ascending id, then targets by
    ascending id) so that a seed fully determines a run.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self) -> float:
        return float(self._gen.random())

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * float(self._gen.random())

    def heading(self) -> float:
        return self.uniform(0.0, TWO_PI)


@dataclass(frozen=True)
class UsvState:
    """One swarm particle. ``personal_best_fitness`` is None until first detection."""

    id: int
    position: Vec2
    velocity: Vec2
    personal_best_pos: Vec2
    personal_best_fitness: Optional[float]
    sensing_radius: float
    pattern: Any = None


# ---------------------------------------------------------------------------
# Parameters and scenario
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApsoParams:
    omega_max: float = 0.9
    omega_min: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    k: int = 3
    total_iterations: int = 200
    epsilon: float = 1e-3
    v_max: float = 2.0


@dataclass(frozen=True)
class TargetBehaviorParams:
    mode: TargetMode = TargetMode.SMOOTH_RANDOM
    alpha: float = 1.0
    direction_change_period: int = 20
    speed: float = 1.0
    # flips the evasion step so targets move toward the nearest USV
    use_printed_eq8_sign: bool = False


@dataclass(frozen=True)
class RadiusRange:
    min: float
    max: float


SensingRadii = Union[tuple[float, ...], RadiusRange]


@dataclass(frozen=True)
class ScenarioConfig:
    n_usvs: int = 20
    n_targets: int = 10
    bounds: Bounds = DEFAULT_BOUNDS
    apso: ApsoParams = field(default_factory=ApsoParams)
    pattern_strategy: Strategy = Strategy.MIXED
    target_behavior: TargetBehaviorParams = field(default_factory=TargetBehaviorParams)
    sensing_radii: SensingRadii = RadiusRange(5.0, 15.0)
    seed: int = 0
    social_mode: SocialMode = SocialMode.KNN_CENTROID
    coverage_grid_cells: int = 50


@dataclass(frozen=True)
class ValidatedConfig(ScenarioConfig):
    """A :class:`ScenarioConfig` that has passed :func:`validate_config`."""


def _is_int(v: Any) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _finite(name: str, v: Any) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
        raise InvalidParam(name, "must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise InvalidParam(name, "must be finite")
    return v


def _validate_apso(p: ApsoParams, n_usvs: int) -> ApsoParams:
    omega_max = _finite("omega_max", p.omega_max)
    omega_min = _finite("omega_min", p.omega_min)
    if omega_max < omega_min:
        raise InvalidParam("omega", "max < min")
    if omega_min < 0:
        raise InvalidParam("omega", "min must be >= 0")
    c1 = _finite("c1", p.c1)
    c2 = _finite("c2", p.c2)
    if c1 < 0:
        raise InvalidParam("c1", "must be >= 0")
    if c2 < 0:
        raise InvalidParam("c2", "must be >= 0")
    if not _is_int(p.k) or p.k < 1:
        raise InvalidParam("k", "must be a positive integer")
    if p.k > n_usvs - 1:
        raise InvalidParam("k", "must be ≤ N−1")
    if not _is_int(p.total_iterations) or p.total_iterations < 0:
        raise InvalidParam("total_iterations", "must be a non-negative integer")
    epsilon = _finite("epsilon", p.epsilon)
    if epsilon <= 0:
        raise InvalidParam("epsilon", "must be positive")
    v_max = _finite("v_max", p.v_max)
    if v_max <= 0:
        raise InvalidParam("v_max", "must be positive")
    return ApsoParams(omega_max, omega_min, c1, c2, int(p.k), int(p.total_iterations), epsilon, v_max)


def _validate_targets(p: TargetBehaviorParams) -> TargetBehaviorParams:
    try:
        mode = TargetMode(p.mode)
    except ValueError:
        raise InvalidParam("mode", f"unknown target mode {p.mode!r}") from None
    alpha = _finite("alpha", p.alpha)
    if alpha < 0:
        raise InvalidParam("alpha", "must be >= 0")
    if mode is TargetMode.PURSUIT_EVASION and alpha <= 0:
        raise InvalidParam("alpha", "must be positive for pursuit-evasion")
    if not _is_int(p.direction_change_period) or p.direction_change_period < 1:
        raise InvalidParam("direction_change_period", "must be a positive integer")
    speed = _finite("speed", p.speed)
    if speed < 0:
        raise InvalidParam("speed", "must be >= 0")
    return TargetBehaviorParams(
        mode, alpha, int(p.direction_change_period), speed, bool(p.use_printed_eq8_sign)
    )


def _validate_radii(r: Any, n_usvs: int) -> SensingRadii:
    if isinstance(r, RadiusRange):
        lo = _finite("sensing_radii", r.min)
        hi = _finite("sensing_radii", r.max)
        if lo <= 0:
            raise InvalidParam("sensing_radii", "range minimum must be positive")
        if hi < lo:
            raise InvalidParam("sensing_radii", "range max < min")
        return RadiusRange(lo, hi)
    radii = tuple(_finite("sensing_radii", v) for v in r)
    if len(radii) != n_usvs:
        raise InvalidParam("sensing_radii", f"expected {n_usvs} radii, got {len(radii)}")
    if any(v <= 0 for v in radii):
        raise InvalidParam("sensing_radii", "radii must be strictly positive")
    return radii


def validate_config(raw: ScenarioConfig) -> ValidatedConfig:
    """Check every invariant of ``raw`` and return a :class:`ValidatedConfig`.

    Raises :class:`InvalidParam` naming the first violated field.
    """
    if isinstance(raw, ValidatedConfig):
        return raw
    if not _is_int(raw.n_usvs) or raw.n_usvs < 1:
        raise InvalidParam("n_usvs", "must be a positive integer")
    if not _is_int(raw.n_targets) or raw.n_targets < 1:
        raise InvalidParam("n_targets", "must be a positive integer")
    if not isinstance(raw.bounds, Bounds):
        raise InvalidParam("bounds", "must be a Bounds")
    try:
        strategy = Strategy(raw.pattern_strategy)
    except ValueError:
        raise InvalidParam("pattern_strategy", f"unknown strategy {raw.pattern_strategy!r}") from None
    try:
        social = SocialMode(raw.social_mode)
    except ValueError:
        raise InvalidParam("social_mode", f"unknown social mode {raw.social_mode!r}") from None
    if not _is_int(raw.seed) or not (0 <= raw.seed < 2**64):
        raise InvalidParam("seed", "must be an unsigned 64-bit integer")
    if not _is_int(raw.coverage_grid_cells) or raw.coverage_grid_cells < 1:
        raise InvalidParam("coverage_grid_cells", "must be a positive integer")
    return ValidatedConfig(
        n_usvs=int(raw.n_usvs),
        n_targets=int(raw.n_targets),
        bounds=raw.bounds,
        apso=_validate_apso(raw.apso, int(raw.n_usvs)),
        pattern_strategy=strategy,
        target_behavior=_validate_targets(raw.target_behavior),
        sensing_radii=_validate_radii(raw.sensing_radii, int(raw.n_usvs)),
        seed=int(raw.seed),
        social_mode=social,
        coverage_grid_cells=int(raw.coverage_grid_cells),
    )


def sample_sensing_radii(rng_range: tuple[float, float], n: int, rng: RngStream) -> list[float]:
    """Draw ``n`` radii uniformly from ``[min, max]`` in USV index order."""
    lo, hi = rng_range
    if not lo > 0:
        raise InvalidParam("sensing_radii", "range minimum must be positive")
    if hi < lo:
        raise InvalidParam("sensing_radii", "range max < min")
    return [rng.uniform(lo, hi) for _ in range(n)]


def resolve_sensing_radii(config: ScenarioConfig, rng: RngStream) -> list[float]:
    r = config.sensing_radii
    if isinstance(r, RadiusRange):
        return sample_sensing_radii((r.min, r.max), config.n_usvs, rng)
    return list(r)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _vec_to_dict(v: Vec2) -> dict:
    return {"x": v.x, "y": v.y}


def config_to_dict(config: ScenarioConfig) -> dict:
    r = config.sensing_radii
    radii: Any = {"min": r.min, "max": r.max} if isinstance(r, RadiusRange) else list(r)
    tb = config.target_behavior
    return {
        "n_usvs": config.n_usvs,
        "n_targets": config.n_targets,
        "bounds": {"min": _vec_to_dict(config.bounds.min), "max": _vec_to_dict(config.bounds.max)},
        "apso": {f.name: getattr(config.apso, f.name) for f in fields(ApsoParams)},
        "pattern_strategy": Strategy(config.pattern_strategy).value,
        "target_behavior": {
            "mode": TargetMode(tb.mode).value,
            "alpha": tb.alpha,
            "direction_change_period": tb.direction_change_period,
            "speed": tb.speed,
            "use_printed_eq8_sign": tb.use_printed_eq8_sign,
        },
        "sensing_radii": radii,
        "seed": config.seed,
        "social_mode": SocialMode(config.social_mode).value,
        "coverage_grid_cells": config.coverage_grid_cells,
    }


def _check_keys(name: str, doc: Any, allowed: set[str], required: set[str] = frozenset()) -> None:
    if not isinstance(doc, dict):
        raise InvalidParam(name, "must be a JSON object")
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InvalidParam(name, f"unknown keys {unknown}")
    missing = sorted(required - set(doc))
    if missing:
        raise InvalidParam(name, f"missing keys {missing}")


def _vec_from_dict(name: str, doc: Any) -> Vec2:
    _check_keys(name, doc, {"x", "y"}, {"x", "y"})
    return Vec2(_finite(name, doc["x"]), _finite(name, doc["y"]))


def config_from_dict(doc: Any) -> ScenarioConfig:
    """Strictly parse a config document; unknown keys are rejected.

    Omitted keys take their defaults.
    """
    top = {f.name for f in fields(ScenarioConfig)}
    _check_keys("config", doc, top)
    kw: dict[str, Any] = {}
    for key in ("n_usvs", "n_targets", "seed", "coverage_grid_cells"):
        if key in doc:
            kw[key] = doc[key]
    if "bounds" in doc:
        b = doc["bounds"]
        _check_keys("bounds", b, {"min", "max"}, {"min", "max"})
        kw["bounds"] = Bounds(_vec_from_dict("bounds.min", b["min"]), _vec_from_dict("bounds.max", b["max"]))
    if "apso" in doc:
        a = doc["apso"]
        _check_keys("apso", a, {f.name for f in fields(ApsoParams)})
        kw["apso"] = ApsoParams(**a)
    if "target_behavior" in doc:
        t = doc["target_behavior"]
        _check_keys("target_behavior", t, {f.name for f in fields(TargetBehaviorParams)})
        kw["target_behavior"] = TargetBehaviorParams(**t)
    if "sensing_radii" in doc:
        r = doc["sensing_radii"]
        if isinstance(r, dict):
            _check_keys("sensing_radii", r, {"min", "max"}, {"min", "max"})
            kw["sensing_radii"] = RadiusRange(r["min"], r["max"])
        elif isinstance(r, list):
            kw["sensing_radii"] = tuple(r)
        else:
            raise InvalidParam("sensing_radii", "must be a list of radii or a {min, max} object")
    if "pattern_strategy" in doc:
        kw["pattern_strategy"] = doc["pattern_strategy"]
    if "social_mode" in doc:
        kw["social_mode"] = doc["social_mode"]
    return ScenarioConfig(**kw)


def load_config(text: str) -> ValidatedConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParam("config", f"malformed JSON: {exc}") from None
    return validate_config(config_from_dict(doc))


def dump_config(config: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2) + "\n"


def with_overrides(config: ScenarioConfig, **changes: Any) -> ValidatedConfig:
    """Copy ``config`` with top-level fields replaced, then re-validate."""
    base = ScenarioConfig(**{f.name: getattr(config, f.name) for f in fields(ScenarioConfig)})
    return validate_config(replace(base, **changes))


def with_apso(config: ScenarioConfig, **changes: Any) -> ValidatedConfig:
    return with_overrides(config, apso=replace(config.apso, **changes))


def with_targets(config: ScenarioConfig, **changes: Any) -> ValidatedConfig:
    return with_overrides(config, target_behavior=replace(config.target_behavior, **changes))
