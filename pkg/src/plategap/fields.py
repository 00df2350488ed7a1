"""Density weights p(x, y) and unit-norm loads f(x, y) acting on the plate."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .quadrature import PanelGrid, integrate


class AdmissibilityError(ValueError):
    """A density violates its bounds or its y-evenness."""


class MassWarning(UserWarning):
    """The mean of a density departs from 1 by more than its tolerance."""


class Family(enum.Enum):
    HOMOGENEOUS = "homogeneous"
    LEVELSET_STAR = "star"
    MIDLINE_STRIP = "midline"
    X_STRIPES = "stripes"
    EDGE_BLOCKS = "edges"
    CUSTOM = "custom"


@dataclass(frozen=True)
class DensityField:
    """A pointwise evaluable weight with declared discontinuity lines.

    `evaluate` must accept broadcastable arrays. Built-in families evaluate
    through |y|, so evenness in y holds by construction.
    """

    family: Family
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    x_breakpoints: tuple[float, ...] = ()
    y_breakpoints: tuple[float, ...] = ()
    has_curved_interface: bool = False
    mass_tolerance: float = 1e-10
    stripes: Optional[int] = None
    x_dependent: bool = True
    y_dependent: bool = True
    threshold: Optional[object] = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        if self.family is Family.X_STRIPES:
            return f"stripes:{self.stripes}"
        return self.family.value

    def __call__(self, x, y):
        return self.evaluate(x, y)


class ForceKind(enum.Enum):
    SIGN = "sign"
    RESONANT = "resonant"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ForceSpec:
    """An L2-normalized load. Resonant loads carry only their mode index until resolved."""

    kind: ForceKind
    evaluate: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = field(default=None, repr=False)
    j: Optional[int] = None
    x_breakpoints: tuple[float, ...] = ()
    y_breakpoints: tuple[float, ...] = ()

    @property
    def name(self) -> str:
        if self.kind is ForceKind.SIGN:
            return "f0"
        if self.kind is ForceKind.RESONANT:
            return f"f{self.j}"
        return "custom"


def sign_force(cfg) -> ForceSpec:
    """+1/sqrt|Omega| on y >= 0 and -1/sqrt|Omega| on y < 0."""
    c = 1.0 / math.sqrt(cfg.area)

    def f(x, y):
        return np.where(np.asarray(y) >= 0.0, c, -c) + 0.0 * np.asarray(x)

    return ForceSpec(ForceKind.SIGN, f, y_breakpoints=(0.0,))


def resonant_force(j: int) -> ForceSpec:
    if j < 1:
        raise ValueError("resonant mode index j must be >= 1")
    return ForceSpec(ForceKind.RESONANT, None, j=j)


def custom_force(g: Callable, grid: PanelGrid, x_breakpoints=(), y_breakpoints=()) -> ForceSpec:
    """Wrap `g`, rescaled to unit L2 norm with the quadrature of `grid`."""
    norm = math.sqrt(integrate(lambda x, y: np.asarray(g(x, y)) ** 2, grid))
    if norm == 0.0:
        raise ValueError("custom force vanishes identically on the grid")

    def f(x, y):
        return np.asarray(g(x, y)) / norm

    return ForceSpec(ForceKind.CUSTOM, f, x_breakpoints=tuple(x_breakpoints), y_breakpoints=tuple(y_breakpoints))


def check_admissible(p: DensityField, cfg, grid: PanelGrid) -> float:
    """Return |mean(p) - 1| over Omega; raise on bound or symmetry violations at the nodes.

    A MassWarning is emitted when the error exceeds `p.mass_tolerance`.
    """
    if not grid.resolves(p.x_breakpoints, p.y_breakpoints):
        raise ValueError(f"grid does not resolve the breakpoints of {p.name}")
    X, Y = grid.mesh()
    values = np.broadcast_to(np.asarray(p(X, Y), dtype=float), X.shape)
    low = values < cfg.alpha
    high = values > cfg.beta
    if low.any() or high.any():
        i, j = np.argwhere(low | high)[0]
        raise AdmissibilityError(
            f"{p.name}: p={values[i, j]} outside [{cfg.alpha}, {cfg.beta}] "
            f"at node ({grid.x_nodes[i]}, {grid.y_nodes[j]})"
        )
    mirrored = np.broadcast_to(np.asarray(p(X, -Y), dtype=float), X.shape)
    if not np.array_equal(values, mirrored):
        i, j = np.argwhere(values != mirrored)[0]
        raise AdmissibilityError(
            f"{p.name}: p(x, y) != p(x, -y) at node ({grid.x_nodes[i]}, {grid.y_nodes[j]})"
        )
    # ratio against the integrated unit function, so p == 1 gives exactly 0
    mass_error = abs(integrate(values, grid) / integrate(np.ones_like(values), grid) - 1.0)
    if mass_error > p.mass_tolerance:
        warnings.warn(
            f"{p.name}: mean density deviates from 1 by {mass_error:.3e} "
            f"(tolerance {p.mass_tolerance:.1e})",
            MassWarning,
            stacklevel=2,
        )
    return mass_error
