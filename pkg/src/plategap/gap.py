"""Forced response by modal superposition and the torsional gap u(x, ell) - u(x, -ell)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import zeta

from .basis import LONGITUDINAL, TORSIONAL
from .config import PlateConfig
from .fields import DensityField, ForceKind, ForceSpec
from .quadrature import PanelGrid, integrate
from .spectrum import Spectrum


class InsufficientModesError(ValueError):
    pass


@dataclass(frozen=True)
class ForceCoefficients:
    """a_m = int p f theta_m (torsional) and b_m = int p f z_m (longitudinal)."""

    a: np.ndarray
    b: Optional[np.ndarray] = None


@dataclass(frozen=True)
class GapProfile:
    x_grid: np.ndarray
    values: np.ndarray
    g_inf: float
    arg_max: float
    N_used: int
    tail_bound: float


def _require(spec: Spectrum, parity: str, n: int) -> None:
    have = len(spec.of(parity))
    if have < n:
        raise InsufficientModesError(f"need {n} {parity} modes, spectrum has {have}")


def mode_l2_norm(spec: Spectrum, j: int, grid: Optional[PanelGrid] = None) -> float:
    """Unweighted L2 norm of the j-th torsional mode, by quadrature."""
    grid = spec.grid if grid is None else grid
    vals = spec.basis.evaluate_grid(spec.torsional[j - 1].coeffs, grid.x_nodes, grid.y_nodes)
    return math.sqrt(integrate(vals**2, grid))


def resolve_force(f: ForceSpec, spec: Spectrum, grid: Optional[PanelGrid] = None) -> ForceSpec:
    """Turn a resonant load into an evaluable theta_j / ||theta_j||_2."""
    if f.kind is not ForceKind.RESONANT:
        return f
    _require(spec, TORSIONAL, f.j)
    c = spec.torsional[f.j - 1].coeffs / mode_l2_norm(spec, f.j, grid)
    basis = spec.basis

    def g(x, y):
        return basis.evaluate(c, x, y)

    return ForceSpec(ForceKind.RESONANT, g, j=f.j)


def project(spec: Spectrum, F: np.ndarray, grid: PanelGrid) -> np.ndarray:
    """int F phi_i over the grid for every basis function; F sampled on grid.mesh()."""
    basis = spec.basis
    Sw = basis.sines(grid.x_nodes) * grid.x_weights[:, None]
    Qw = basis.ypoly(grid.y_nodes) * grid.y_weights[:, None]
    return (Sw.T @ F @ Qw).ravel()


def force_coefficients(
    f: ForceSpec,
    p: DensityField,
    spec: Spectrum,
    N: int,
    grid: Optional[PanelGrid] = None,
    longitudinal: bool = False,
    analytic_resonant: bool = True,
) -> ForceCoefficients:
    """Modal load coefficients for the first N modes of each requested parity.

    Resonant loads use the orthonormality shortcut a_m = delta_mj / ||theta_j||_2
    unless `analytic_resonant` is False, in which case they are integrated
    like any other load.
    """
    grid = spec.grid if grid is None else grid
    _require(spec, TORSIONAL, N)
    if longitudinal:
        _require(spec, LONGITUDINAL, N)
    if f.kind is ForceKind.RESONANT and analytic_resonant:
        if f.j > N:
            raise InsufficientModesError(f"resonant mode {f.j} is beyond the N={N} kept modes")
        a = np.zeros(N)
        a[f.j - 1] = 1.0 / mode_l2_norm(spec, f.j, grid)
        b = np.zeros(N) if longitudinal else None
        return ForceCoefficients(a, b)
    f = resolve_force(f, spec, grid)
    if not grid.resolves(f.x_breakpoints, f.y_breakpoints):
        raise ValueError("grid does not resolve the breakpoints of the load")
    X, Y = grid.mesh()
    F = np.broadcast_to(np.asarray(p(X, Y), dtype=float) * np.asarray(f.evaluate(X, Y), dtype=float), X.shape)
    proj = project(spec, F, grid)
    a = spec.coeff_matrix(TORSIONAL, N) @ proj
    b = spec.coeff_matrix(LONGITUDINAL, N) @ proj if longitudinal else None
    return ForceCoefficients(a, b)


def trace_growth(spec: Spectrum, N: int) -> float:
    """max over m <= N of m * sup|theta_m(., ell)| / sqrt(nu_m)."""
    x = np.linspace(0.0, math.pi, 1025)
    C = spec.coeff_matrix(TORSIONAL, N)
    sup = np.abs(spec.basis.trace(C, x)).max(axis=-1)
    m = np.arange(1, len(sup) + 1)
    return float(np.max(m * sup / np.sqrt(spec.values(TORSIONAL)[: len(sup)])))


def estimate_tail(N: int, cfg: PlateConfig, trace_scale: float) -> float:
    """Bound on the gap series terms beyond N.

    Uses |a_m| / sqrt(nu_m) <= beta / ((1 - sigma) m^2) and models the trace
    factor as sup|theta_m(., ell)| / sqrt(nu_m) <= trace_scale / m, giving
    2 beta trace_scale / (1 - sigma) * sum_{m > N} m^-3.
    """
    return float(2.0 * cfg.beta * trace_scale / (1.0 - cfg.sigma) * zeta(3.0, N + 1))


def gap_profile(a, spec: Spectrum, cfg: PlateConfig, x_samples: Optional[int] = None) -> GapProfile:
    """G(x) = 2 sum_m a_m / nu_m theta_m(x, ell) on a uniform grid of [0, pi]."""
    a = np.asarray(a, dtype=float)
    N = len(a)
    _require(spec, TORSIONAL, N)
    x = np.linspace(0.0, math.pi, cfg.x_samples if x_samples is None else x_samples)
    nu = spec.values(TORSIONAL)[:N]
    traces = spec.basis.trace(spec.coeff_matrix(TORSIONAL, N), x)  # (N, nx)
    values = 2.0 * (a / nu) @ traces
    k = int(np.argmax(np.abs(values)))
    tail = estimate_tail(N, cfg, trace_growth(spec, N))
    return GapProfile(x, values, float(abs(values[k])), float(x[k]), N, tail)


def solution_field(a, b, spec: Spectrum) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Truncated series u = sum a_m/nu_m theta_m + b_m/mu_m z_m as a callable u(x, y)."""
    a = np.asarray(a, dtype=float)
    c = (a / spec.values(TORSIONAL)[: len(a)]) @ spec.coeff_matrix(TORSIONAL, len(a))
    if b is not None:
        b = np.asarray(b, dtype=float)
        c = c + (b / spec.values(LONGITUDINAL)[: len(b)]) @ spec.coeff_matrix(LONGITUDINAL, len(b))
    basis = spec.basis

    def u(x, y):
        return basis.evaluate(c, x, y)

    u.coeffs = c
    return u


def ginf_vs_j(spec: Spectrum, p: DensityField, cfg: PlateConfig, j_max: int) -> list[tuple[int, float]]:
    """Maximal gap for the resonant loads f_j, j = 1..j_max."""
    from .fields import resonant_force

    N = max(cfg.N, j_max)
    out = []
    for j in range(1, j_max + 1):
        co = force_coefficients(resonant_force(j), p, spec, N)
        out.append((j, gap_profile(co.a, spec, cfg).g_inf))
    return out
