"""Run configuration: one schema holding every tunable the experiments use.

Several simulation parameters have no canonical value (edge correlation,
the beta and alpha sweep grids, rank tie handling); their defaults are
declared here so each run's manifest makes them visible.  Config files
are YAML mappings (JSON manifests parse as YAML, so a manifest written by
a previous run can be fed back in to reproduce it).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Raised for unknown keys or invalid values in a run configuration."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    batches: int = 20
    n_per_batch: int = 200
    n_bins: int = 3
    rho: float = 0.3
    alpha: float = 0.0
    k: int = 1
    beta_grid: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)
    alpha_grid: tuple = (-4.0, -2.0, 0.0, 2.0, 4.0)
    units: str = "nats"

    def __post_init__(self) -> None:
        if self.units not in ("nats", "bits"):
            raise ConfigError(f"units must be 'nats' or 'bits', got {self.units!r}")
        if self.batches < 1 or self.n_per_batch < 1:
            raise ConfigError("batches and n_per_batch must be positive")
        if self.n_bins < 2:
            raise ConfigError("n_bins must be at least 2")
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta_grid"] = list(self.beta_grid)
        d["alpha_grid"] = list(self.alpha_grid)
        return d


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def config_from_mapping(mapping: dict) -> RunConfig:
    if not isinstance(mapping, dict):
        raise ConfigError(f"config must be a mapping, got {type(mapping).__name__}")
    # a manifest from a previous run embeds the config under "config"
    if "config" in mapping and isinstance(mapping["config"], dict):
        mapping = mapping["config"]
    unknown = set(mapping) - _FIELD_NAMES
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**mapping)


def load_config(path: str | Path) -> RunConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse config {path}: {exc}") from exc
    if data is None:
        data = {}
    return config_from_mapping(data)


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Replace fields with CLI-provided values; None means keep the config value."""
    changes = {k: v for k, v in overrides.items() if v is not None and v != ()}
    bad = set(changes) - _FIELD_NAMES
    if bad:
        raise ConfigError(f"unknown config overrides: {sorted(bad)}")
    return replace(config, **changes) if changes else config
