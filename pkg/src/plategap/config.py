"""Plate configuration: geometry, material, density bounds and discretization."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    """Raised when a configuration violates one of its invariants."""


@dataclass(frozen=True)
class PlateConfig:
    """Parameters of the plate Omega = (0, pi) x (-ell, ell) and of its discretization.

    Defaults are the narrow bridge-deck setting (ell = pi/150, sigma = 0.2)
    with the two-material bounds alpha = 0.5, beta = 1.5.
    """

    ell: float = math.pi / 150
    sigma: float = 0.2
    alpha: float = 0.5
    beta: float = 1.5
    M: int = 60  # sine modes in x
    K: int = 8  # max polynomial degree in y
    N: int = 30  # torsional modes kept in the gap series
    panels_x: int = 256
    panels_y: int = 32
    gauss_order: int = 6
    x_samples: int = 2049
    area_nx: int = 1024  # midpoint grid for level-set areas
    area_ny: int = 128

    @property
    def area(self) -> float:
        return 2.0 * math.pi * self.ell

    @property
    def n_modes(self) -> int:
        """Eigenpairs computed per parity class; one per x-mode."""
        return self.M

    def replace(self, **changes) -> "PlateConfig":
        data = asdict(self)
        data.update(changes)
        return validate_config(PlateConfig(**data))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PlateConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        return validate_config(cls(**data))


_INT_FIELDS = ("M", "K", "N", "panels_x", "panels_y", "gauss_order", "x_samples", "area_nx", "area_ny")


def validate_config(cfg: PlateConfig) -> PlateConfig:
    """Return `cfg` unchanged if every invariant holds, else raise ConfigError."""
    for name in _INT_FIELDS:
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    for name in ("ell", "sigma", "alpha", "beta"):
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ConfigError(f"{name} must be a finite real number, got {value!r}")
    if not 0.0 < cfg.ell <= math.pi / 4:
        raise ConfigError(f"ell must satisfy 0 < ell <= pi/4 (narrow plate), got {cfg.ell}")
    if not 0.0 < cfg.sigma < 0.5:
        raise ConfigError(f"sigma must satisfy 0 < sigma < 1/2, got {cfg.sigma}")
    if not cfg.alpha > 0.0:
        raise ConfigError(f"alpha must be positive, got {cfg.alpha}")
    if not cfg.alpha < 1.0:
        raise ConfigError(f"alpha must be < 1, got {cfg.alpha}")
    if not cfg.beta > 1.0:
        raise ConfigError(f"beta must be > 1, got {cfg.beta}")
    if cfg.N > cfg.n_modes:
        raise ConfigError(f"N={cfg.N} exceeds the number of torsional eigenpairs computed ({cfg.n_modes} = M)")
    if cfg.x_samples < 3:
        raise ConfigError("x_samples must be at least 3")
    return cfg


def load_config(path: str | Path) -> PlateConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    return PlateConfig.from_dict(data)


def save_config(cfg: PlateConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
