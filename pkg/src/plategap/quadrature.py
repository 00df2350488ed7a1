"""Composite Gauss-Legendre quadrature over the plate, with discontinuity lines as panel edges."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


@lru_cache(maxsize=None)
def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def composite_rule(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a Gauss rule of `order` points on every panel [edges[i], edges[i+1]]."""
    xi, w = _gauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * xi[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def _merge_edges(lo: float, hi: float, n: int, breakpoints: Sequence[float]) -> np.ndarray:
    uniform = np.linspace(lo, hi, n + 1)
    extra = np.asarray([b for b in breakpoints], dtype=float)
    if extra.size and (extra.min() < lo or extra.max() > hi):
        raise ValueError(f"breakpoints must lie in [{lo}, {hi}]")
    edges = np.unique(np.concatenate([uniform, extra]))
    # drop near-duplicates, keeping the explicit breakpoint
    tol = 1e-12 * (hi - lo)
    keep = [edges[0]]
    for e in edges[1:]:
        if e - keep[-1] > tol:
            keep.append(e)
        elif np.any(np.abs(extra - e) <= tol):
            keep[-1] = e
    keep[0], keep[-1] = lo, hi
    return np.asarray(keep)


@dataclass(frozen=True)
class PanelGrid:
    """Tensor-product composite rule over (0, pi) x (-ell, ell)."""

    x_edges: np.ndarray
    y_edges: np.ndarray
    order: int
    x_nodes: np.ndarray = field(init=False, repr=False)
    x_weights: np.ndarray = field(init=False, repr=False)
    y_nodes: np.ndarray = field(init=False, repr=False)
    y_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        xn, xw = composite_rule(np.asarray(self.x_edges, dtype=float), self.order)
        yn, yw = composite_rule(np.asarray(self.y_edges, dtype=float), self.order)
        for name, value in (("x_nodes", xn), ("x_weights", xw), ("y_nodes", yn), ("y_weights", yw)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_panels(self) -> int:
        return (len(self.x_edges) - 1) * (len(self.y_edges) - 1)

    @property
    def ell(self) -> float:
        return float(self.y_edges[-1])

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_nodes, self.y_nodes, indexing="ij")

    def resolves(self, x_breakpoints: Sequence[float] = (), y_breakpoints: Sequence[float] = ()) -> bool:
        def has(edges, pts):
            return all(np.min(np.abs(edges - b)) <= 1e-12 * (edges[-1] - edges[0]) for b in pts)

        return has(self.x_edges, x_breakpoints) and has(self.y_edges, y_breakpoints)


def build_panels(cfg, breakpoints_x: Sequence[float] = (), breakpoints_y: Sequence[float] = ()) -> PanelGrid:
    """Uniform panels_x x panels_y refinement with every breakpoint inserted as a panel edge."""
    x_edges = _merge_edges(0.0, math.pi, cfg.panels_x, breakpoints_x)
    y_edges = _merge_edges(-cfg.ell, cfg.ell, cfg.panels_y, breakpoints_y)
    return PanelGrid(x_edges, y_edges, cfg.gauss_order)


def integrate(g: Callable | np.ndarray, grid: PanelGrid) -> float:
    """Composite Gauss value of the integral of g over the grid.

    `g` is either a vectorized callable g(X, Y) or an array of values on `grid.mesh()`.
    """
    if callable(g):
        X, Y = grid.mesh()
        values = np.broadcast_to(np.asarray(g(X, Y), dtype=float), X.shape)
    else:
        values = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise FloatingPointError(
            f"non-finite integrand at node x={grid.x_nodes[bad[0]]}, y={grid.y_nodes[bad[1]]}"
        )
    # fixed order: y first, then x
    return float(grid.x_weights @ (values @ grid.y_weights))


@dataclass(frozen=True)
class AreaGrid:
    """Uniform midpoint grid used for measuring sublevel sets by indicator counting."""

    ell: float
    nx: int = 1024
    ny: int = 128

    @property
    def cell_area(self) -> float:
        return (math.pi / self.nx) * (2 * self.ell / self.ny)

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * (math.pi / self.nx)

    @property
    def y(self) -> np.ndarray:
        return -self.ell + (np.arange(self.ny) + 0.5) * (2 * self.ell / self.ny)

    def sample(self, g: Callable) -> np.ndarray:
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        return np.asarray(g(X, Y), dtype=float)


def sublevel_area(g: Callable | np.ndarray, t: float, grid: AreaGrid) -> float:
    """Measure of {g <= t}; `g` may be pre-sampled on `grid` to avoid re-evaluation."""
    values = grid.sample(g) if callable(g) else np.asarray(g)
    return float(np.count_nonzero(values <= t)) * grid.cell_area
