"""Seeded USV swarm simulation with an APSO-kNN tracking controller."""

from .apso import GlobalBest, inertia_weight, knn_neighbors
from .core import (
    ApsoParams,
    Bounds,
    InvalidParam,
    RadiusRange,
    RngStream,
    ScenarioConfig,
    SocialMode,
    Strategy,
    TargetBehaviorParams,
    TargetMode,
    UsvState,
    ValidatedConfig,
    Vec2,
    validate_config,
)
from .engine import SimState, SimTrace, initialize, run, step

__version__ = "0.1.0"
