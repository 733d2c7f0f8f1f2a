"""Named scenario presets. Every preset uses 20 USVs and 200 iterations."""

from __future__ import annotations

from .core import ScenarioConfig, TargetBehaviorParams, TargetMode, ValidatedConfig, validate_config

PRESET_NAMES = ("targets5", "targets10", "targets20", "evasion10")


def preset(name: str) -> ValidatedConfig:
    if name == "targets5":
        cfg = ScenarioConfig(n_targets=5)
    elif name == "targets10":
        cfg = ScenarioConfig(n_targets=10)
    elif name == "targets20":
        cfg = ScenarioConfig(n_targets=20)
    elif name == "evasion10":
        cfg = ScenarioConfig(n_targets=10, target_behavior=TargetBehaviorParams(mode=TargetMode.PURSUIT_EVASION))
    else:
        raise KeyError(f"unknown preset {name!r}; valid names: {', '.join(PRESET_NAMES)}")
    return validate_config(cfg)


def default_config() -> ValidatedConfig:
    return preset("targets10")
