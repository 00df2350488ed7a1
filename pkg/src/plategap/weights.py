"""The five two-material density configurations compared on the plate."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import PlateConfig
from .fields import DensityField, Family
from .quadrature import AreaGrid, sublevel_area

logger = logging.getLogger(__name__)

WEIGHT_NAMES = ("homogeneous", "star", "midline", "stripes:10", "edges")


@dataclass(frozen=True)
class ThresholdSearchResult:
    t_star: float
    achieved_area: float
    target_area: float
    iterations: int


def make_homogeneous() -> DensityField:
    def p(x, y):
        return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)

    return DensityField(Family.HOMOGENEOUS, p, mass_tolerance=0.0, x_dependent=False, y_dependent=False)


def heavy_fraction(cfg: PlateConfig) -> float:
    """Fraction of Omega carrying beta in a mass-preserving two-material weight."""
    return (1.0 - cfg.alpha) / (cfg.beta - cfg.alpha)


def find_threshold(
    samples: np.ndarray,
    target: float,
    grid: AreaGrid,
    tol: float,
    max_iter: int = 60,
) -> ThresholdSearchResult:
    """Bisection on t for |{g <= t}| = target, g pre-sampled on `grid`.

    Iterates until the area is within one grid cell of the target (or
    `max_iter`); `tol` is the acceptance bound on the final area error.
    """
    lo, hi = 0.0, float(samples.max())
    if sublevel_area(samples, lo, grid) > target + tol or sublevel_area(samples, hi, grid) < target - tol:
        raise RuntimeError("threshold bisection failed to bracket the target area")
    best = (abs(sublevel_area(samples, hi, grid) - target), hi, sublevel_area(samples, hi, grid), 0)
    for it in range(1, max_iter + 1):
        t = 0.5 * (lo + hi)
        area = sublevel_area(samples, t, grid)
        if abs(area - target) < best[0]:
            best = (abs(area - target), t, area, it)
        if abs(area - target) <= grid.cell_area:
            break
        if area < target:
            lo = t
        else:
            hi = t
    err, t, area, it = best
    if err > tol:
        raise RuntimeError(f"threshold search missed the target area by {err:.3e} (tolerance {tol:.3e})")
    return ThresholdSearchResult(t, area, target, it)


def make_levelset_star(theta11, basis, cfg: PlateConfig, area_tol: float = 1e-3) -> DensityField:
    """beta on S* = {theta11^2 <= t*}, alpha elsewhere, with |S*| = heavy_fraction * |Omega|.

    `theta11` is the coefficient vector of the first torsional mode of the
    homogeneous plate on `basis`.
    """
    coeffs = np.array(theta11, dtype=float)
    coeffs.setflags(write=False)
    grid = AreaGrid(cfg.ell, cfg.area_nx, cfg.area_ny)
    samples = basis.evaluate_grid(coeffs, grid.x, grid.y) ** 2
    target = heavy_fraction(cfg) * cfg.area
    result = find_threshold(samples, target, grid, area_tol * cfg.area)
    t_star, alpha, beta = result.t_star, cfg.alpha, cfg.beta
    logger.debug("p*: t*=%.6g after %d bisection steps", t_star, result.iterations)

    def p(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        theta = basis.evaluate(coeffs, x, np.abs(y))
        return np.where(theta**2 <= t_star, beta, alpha)

    return DensityField(
        Family.LEVELSET_STAR,
        p,
        has_curved_interface=True,
        mass_tolerance=1e-3,
        threshold=result,
    )


def midline_half_width(cfg: PlateConfig) -> float:
    return cfg.ell * (cfg.beta - 1.0) / (cfg.beta - cfg.alpha)


def make_midline_strip(cfg: PlateConfig) -> DensityField:
    """beta on |y| < ell (beta-1)/(beta-alpha), alpha outside."""
    h, alpha, beta = midline_half_width(cfg), cfg.alpha, cfg.beta

    def p(x, y):
        y = np.abs(np.asarray(y, dtype=float)) + 0.0 * np.asarray(x)
        return np.where(y < h, beta, alpha)

    return DensityField(Family.MIDLINE_STRIP, p, y_breakpoints=(-h, h), x_dependent=False)


def stripe_intervals(i: int, cfg: PlateConfig) -> list[tuple[float, float]]:
    half = (math.pi / i) * (1.0 - cfg.alpha) / (2.0 * (cfg.beta - cfg.alpha))
    return [(math.pi * (2 * h - 1) / (2 * i) - half, math.pi * (2 * h - 1) / (2 * i) + half) for h in range(1, i + 1)]


def make_xstripes(i: int, cfg: PlateConfig) -> DensityField:
    """beta on i evenly spaced stripes across the plate, alpha elsewhere."""
    if i < 1:
        raise ValueError("number of stripes must be >= 1")
    intervals = stripe_intervals(i, cfg)
    for (a0, b0), (a1, _) in zip(intervals, intervals[1:]):
        assert b0 < a1, "stripes overlap"
    lo = np.array([a for a, _ in intervals])
    hi = np.array([b for _, b in intervals])
    alpha, beta = cfg.alpha, cfg.beta

    def p(x, y):
        x = np.asarray(x, dtype=float) + 0.0 * np.asarray(y)
        k = np.searchsorted(lo, x, side="right") - 1
        inside = (k >= 0) & (x < hi[np.clip(k, 0, None)])
        return np.where(inside, beta, alpha)

    edges = tuple(float(e) for ab in intervals for e in ab)
    return DensityField(Family.X_STRIPES, p, x_breakpoints=edges, stripes=i, y_dependent=False)


def edge_interval(cfg: PlateConfig) -> tuple[float, float]:
    half = math.pi * (cfg.beta - 1.0) / (2.0 * (cfg.beta - cfg.alpha))
    return (math.pi / 2 - half, math.pi / 2 + half)


def make_edge_blocks(cfg: PlateConfig) -> DensityField:
    """alpha on a central interval in x, beta on the two blocks next to the hinged edges."""
    a, b = edge_interval(cfg)
    alpha, beta = cfg.alpha, cfg.beta

    def p(x, y):
        x = np.asarray(x, dtype=float) + 0.0 * np.asarray(y)
        return np.where((x > a) & (x < b), alpha, beta)

    return DensityField(Family.EDGE_BLOCKS, p, x_breakpoints=(a, b), y_dependent=False)


def make_weight(name: str, cfg: PlateConfig, homogeneous_spectrum=None) -> DensityField:
    """Build a catalog weight by CLI name: homogeneous, star, midline, stripes:i, edges."""
    if name == "homogeneous":
        return make_homogeneous()
    if name == "star":
        if homogeneous_spectrum is None:
            from .spectrum import compute_spectrum

            homogeneous_spectrum = compute_spectrum(cfg, make_homogeneous())
        theta = homogeneous_spectrum.torsional[0]
        return make_levelset_star(theta.coeffs, homogeneous_spectrum.basis, cfg)
    if name == "midline":
        return make_midline_strip(cfg)
    if name == "edges":
        return make_edge_blocks(cfg)
    if name.startswith("stripes:"):
        try:
            i = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad stripe count in weight name {name!r}") from None
        return make_xstripes(i, cfg)
    raise ValueError(f"unknown weight {name!r}; expected one of homogeneous, star, midline, stripes:i, edges")


def rasterize(p: DensityField, cfg: PlateConfig, nx: int, ny: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values of p on a uniform nx x ny vertex grid of the closed rectangle."""
    x = np.linspace(0.0, math.pi, nx)
    y = np.linspace(-cfg.ell, cfg.ell, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    return X, Y, np.broadcast_to(np.asarray(p(X, Y), dtype=float), X.shape)
