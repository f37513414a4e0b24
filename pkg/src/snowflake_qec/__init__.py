"""Emulator and benchmark harness for the Snowflake streaming decoder."""

__version__ = "0.1.0"

from .graph import WindowGraph, b_min, build_template, canonical_family
from .noise import NoiseConfig, defects_from_flips, sample_round
from .simulate import run_trial

__all__ = [
    "NoiseConfig",
    "WindowGraph",
    "b_min",
    "build_template",
    "canonical_family",
    "defects_from_flips",
    "run_trial",
    "sample_round",
]
