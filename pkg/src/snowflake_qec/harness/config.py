"""Experiment configuration: YAML file plus command-line overrides."""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from ..graph import canonical_family
from ..simulate import DECODERS


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    decoder: str = "snowflake"
    family: str = "surface-circuit"
    distances: list = field(default_factory=lambda: [3, 5, 7])
    noise_levels: list = field(default_factory=lambda: [1e-3])
    blocks: int = 10_000
    blocks_per_trial: int = 1_000
    seed: int = 0
    workers: int = 1
    out_dir: str = "runs"
    merge_cap: int | None = None
    horizon: int | None = None
    backend: str | None = None

    def validate(self):
        if self.decoder not in DECODERS:
            raise ConfigError(f"decoder must be one of {DECODERS}, got {self.decoder!r}")
        try:
            self.family = canonical_family(self.family)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not self.distances:
            raise ConfigError("at least one distance is required")
        for d in self.distances:
            if not isinstance(d, int) or d < 2:
                raise ConfigError(f"distances must be integers >= 2, got {d!r}")
        if not self.noise_levels:
            raise ConfigError("at least one noise level is required")
        for p in self.noise_levels:
            if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
                raise ConfigError(f"noise levels must lie in [0, 1], got {p!r}")
        if not isinstance(self.blocks, int) or self.blocks < 1:
            raise ConfigError("blocks must be a positive integer")
        if not isinstance(self.blocks_per_trial, int) or self.blocks_per_trial < 1:
            raise ConfigError("blocks_per_trial must be a positive integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        if self.backend not in (None, "numba", "numpy"):
            raise ConfigError(f"backend must be numba or numpy, got {self.backend!r}")
        if self.merge_cap is not None and self.merge_cap < 1:
            raise ConfigError("merge_cap must be positive")
        if self.horizon is not None and self.horizon < 1:
            raise ConfigError("horizon must be positive")
        self.distances = sorted(self.distances)
        self.noise_levels = sorted(float(p) for p in self.noise_levels)
        return self

    def to_dict(self):
        return asdict(self)


def _parse_list(text, cast):
    return [cast(x) for x in str(text).replace(",", " ").split()]


def load_config(path=None, overrides=None, defaults=None):
    """``defaults``, then the YAML file at ``path``, then non-None ``overrides``."""
    values = dict(defaults or {})
    if path is not None:
        try:
            raw = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a mapping")
        values.update(raw)
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        if isinstance(values.get("distances"), (str, int)):
            values["distances"] = _parse_list(values["distances"], int)
        if isinstance(values.get("noise_levels"), (str, float, int)):
            values["noise_levels"] = _parse_list(values["noise_levels"], float)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(**values).validate()
