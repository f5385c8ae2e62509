"""Scheduling simulator and MAPPO trainer for space-air-ground networks."""

from ._saguin import (
    ConfigError,
    Environment,
    SchedulingError,
    aoi_bound,
    cli,
    presets,
    scenario_json,
    simulate,
)

__all__ = [
    "ConfigError",
    "Environment",
    "SchedulingError",
    "aoi_bound",
    "cli",
    "presets",
    "scenario_json",
    "simulate",
]
