"""Weighted eigenproblem of the partially hinged plate by a Galerkin method.

The stiffness is the plate-energy form

    (u, v) = int  Lap u Lap v + (1 - sigma)(2 u_xy v_xy - u_xx v_yy - u_yy v_xx)

and the mass is int p u v. Both are assembled on SpectralBasis; the
generalized problem A c = lambda B c is solved densely per parity block.
"""
from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg

from .basis import LONGITUDINAL, TORSIONAL, SpectralBasis
from .config import PlateConfig
from .fields import DensityField, check_admissible
from .quadrature import PanelGrid, build_panels

logger = logging.getLogger(__name__)


class SpectrumError(RuntimeError):
    """Numerical failure while solving the eigenproblem."""


def stiffness_block(basis: SpectralBasis, m: int, sigma: float) -> np.ndarray:
    """Stiffness between sin(m x) q_k and sin(m x) q_l, with the x-integral done in closed form.

    (pi/2) int [(g'' - m^2 g)(h'' - m^2 h) + (1 - sigma) m^2 (2 g'h' + g h'' + g'' h)] dy
    """
    yq, wq = legendre.leggauss(basis.K + 3)
    y, w = basis.ell * yq, basis.ell * wq
    Q0 = basis.ypoly(y)
    Q1 = basis.ypoly(y, 1)
    Q2 = basis.ypoly(y, 2)

    def gram(a, b):
        return (a * w[:, None]).T @ b

    m2 = float(m * m)
    G02 = gram(Q0, Q2)
    blk = gram(Q2, Q2) + m2 * m2 * gram(Q0, Q0) - sigma * m2 * (G02 + G02.T) + 2 * (1 - sigma) * m2 * gram(Q1, Q1)
    blk = 0.5 * math.pi * blk
    return 0.5 * (blk + blk.T)


def assemble_stiffness(basis: SpectralBasis, cfg: PlateConfig) -> np.ndarray:
    """Full stiffness matrix; block diagonal across x-modes."""
    A = np.zeros((basis.size, basis.size))
    n = basis.K + 1
    for m in range(1, basis.M + 1):
        s = slice((m - 1) * n, m * n)
        A[s, s] = stiffness_block(basis, m, cfg.sigma)
    return A


def assemble_mass(basis: SpectralBasis, p: DensityField, grid: PanelGrid) -> np.ndarray:
    """Entries int p phi_i phi_j by composite quadrature on `grid`.

    Cross-parity entries are set to exact zeros (p is y-even), and so are
    entries coupling m != n when p does not depend on x.
    """
    if not grid.resolves(p.x_breakpoints, p.y_breakpoints):
        raise ValueError(f"grid does not resolve the breakpoints of {p.name}")
    X, Y = grid.mesh()
    P = np.broadcast_to(np.asarray(p(X, Y), dtype=float), X.shape)
    S = basis.sines(grid.x_nodes)  # (nx, M)
    Q = basis.ypoly(grid.y_nodes)  # (ny, K+1)
    nk = basis.K + 1
    QQ = (Q[:, :, None] * Q[:, None, :]).reshape(len(grid.y_nodes), nk * nk)
    T = (P * grid.y_weights[None, :]) @ QQ  # (nx, nk*nk)
    Sw = S * grid.x_weights[:, None]
    B4 = np.empty((basis.M, basis.M, nk, nk))
    for k in range(nk):
        for l in range(k, nk):
            if (k + l) % 2:
                B4[:, :, k, l] = B4[:, :, l, k] = 0.0
                continue
            blk = Sw.T @ (S * T[:, k * nk + l][:, None])
            B4[:, :, k, l] = blk
            B4[:, :, l, k] = blk
    if not p.x_dependent:
        off = ~np.eye(basis.M, dtype=bool)
        B4[off] = 0.0
    B = B4.transpose(0, 2, 1, 3).reshape(basis.size, basis.size)
    return 0.5 * (B + B.T)


@dataclass
class RawEigenpairs:
    parity: str
    index: np.ndarray  # flat basis indices spanned by the vectors
    values: np.ndarray
    vectors: np.ndarray  # (len(index), n)


def solve_spectrum(A: np.ndarray, B: np.ndarray, n_eig: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Smallest n_eig eigenpairs of A x = lambda B x with B-orthonormal x.

    The stiffness spans many orders of magnitude (m^4 up to q_K'' terms), so
    the reduction goes through the Cholesky factor A = R^T R: the smallest
    lambda are the largest eigenvalues of R^-T B R^-1 and come out with
    small relative residuals. A factorization of B loses about 1e-4 there.
    """
    n = A.shape[0]
    if A.shape != B.shape or A.shape != (n, n):
        raise ValueError("A and B must be square matrices of equal shape")
    if not (np.array_equal(A, A.T) and np.array_equal(B, B.T)):
        raise SpectrumError("A and B must be exactly symmetric")
    n_eig = n if n_eig is None else min(int(n_eig), n)
    try:
        R = linalg.cholesky(A, lower=False)
    except linalg.LinAlgError as exc:
        raise SpectrumError("stiffness matrix is not positive definite") from exc
    W = linalg.solve_triangular(R, B, trans="T")
    C = linalg.solve_triangular(R, W.T, trans="T")
    C = 0.5 * (C + C.T)
    try:
        w, Y = linalg.eigh(C, subset_by_index=[n - n_eig, n - 1])
    except linalg.LinAlgError as exc:
        raise SpectrumError("symmetric eigensolver failed to converge") from exc
    if w[0] <= 0.0:
        raise SpectrumError("mass matrix is not positive definite")
    w, Y = w[::-1], Y[:, ::-1]
    X = linalg.solve_triangular(R, Y)
    X /= np.sqrt(np.einsum("in,ij,jn->n", X, B, X))
    return 1.0 / w, X


@dataclass(frozen=True)
class EigenPair:
    lam: float
    parity: str
    index: int  # 1-based within its parity class
    coeffs: np.ndarray = field(repr=False)
    block: int = 0  # origin block, for deterministic tie-breaking


@dataclass
class Spectrum:
    """Ordered, labelled, L2_p-normalized eigenpairs."""

    pairs: list[EigenPair]
    basis: SpectralBasis
    density: DensityField
    grid: PanelGrid
    mass: Optional[np.ndarray] = field(default=None, repr=False)

    def of(self, parity: str) -> list[EigenPair]:
        return [q for q in self.pairs if q.parity == parity]

    @cached_property
    def torsional(self) -> list[EigenPair]:
        return self.of(TORSIONAL)

    @cached_property
    def longitudinal(self) -> list[EigenPair]:
        return self.of(LONGITUDINAL)

    def nu(self, j: int) -> float:
        return self.torsional[j - 1].lam

    def mu(self, j: int) -> float:
        return self.longitudinal[j - 1].lam

    def values(self, parity: Optional[str] = None) -> np.ndarray:
        src = self.pairs if parity is None else self.of(parity)
        return np.array([q.lam for q in src])

    def coeff_matrix(self, parity: str, n: Optional[int] = None) -> np.ndarray:
        src = self.of(parity)[:n]
        return np.array([q.coeffs for q in src])

    def to_json(self) -> dict:
        return {
            "density": self.density.name,
            "M": self.basis.M,
            "K": self.basis.K,
            "ell": self.basis.ell,
            "modes": [
                {
                    "lambda": q.lam,
                    "parity": q.parity,
                    "m_index": q.index,
                    "coeffs": q.coeffs.tolist(),
                }
                for q in self.pairs
            ],
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


def _edge_signs(basis: SpectralBasis, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """+-1 per row making the free-edge trace positive at its first peak of |trace|."""
    t = basis.trace(coeffs, x)
    a = np.abs(t)
    # first point within round-off of the maximum: symmetric modes have twin peaks
    first = np.argmax(a >= a.max(axis=-1, keepdims=True) * (1 - 1e-6), axis=-1)
    return np.where(np.take_along_axis(t, first[:, None], axis=-1)[:, 0] < 0, -1.0, 1.0)


def label_and_normalize(
    raw: list[RawEigenpairs],
    p: DensityField,
    grid: PanelGrid,
    basis: SpectralBasis,
    mass: Optional[np.ndarray] = None,
    x_samples: int = 2049,
) -> Spectrum:
    """Merge parity-block solutions into a Spectrum.

    Each vector is rescaled so int p phi^2 = 1 on `grid`, its sign is fixed by
    the free-edge trace, and modes are ordered by (lambda, parity, block).
    """
    if mass is None:
        mass = assemble_mass(basis, p, grid)
    x = np.linspace(0.0, math.pi, x_samples)
    parity_rank = {LONGITUDINAL: 0, TORSIONAL: 1}
    records = []
    for b, blk in enumerate(raw):
        C = np.zeros((blk.vectors.shape[1], basis.size))
        C[:, blk.index] = blk.vectors.T
        sub = mass[np.ix_(blk.index, blk.index)]
        norms = np.sqrt(np.einsum("ni,ij,nj->n", blk.vectors.T, sub, blk.vectors.T))
        C /= norms[:, None]
        C *= _edge_signs(basis, C, x)[:, None]
        for lam, c in zip(blk.values, C):
            records.append((float(lam), parity_rank[blk.parity], b, blk.parity, c.copy()))
    records.sort(key=lambda r: (r[0], r[1], r[2]))
    counters = {LONGITUDINAL: 0, TORSIONAL: 0}
    pairs = []
    for lam, _, b, parity, c in records:
        counters[parity] += 1
        c.setflags(write=False)
        pairs.append(EigenPair(lam, parity, counters[parity], c, b))
    return Spectrum(pairs, basis, p, grid, mass)


def spectrum_grid(cfg: PlateConfig, p: DensityField) -> PanelGrid:
    """Quadrature grid resolving p and the sign-force line y = 0."""
    return build_panels(cfg, p.x_breakpoints, tuple(p.y_breakpoints) + (0.0,))


def compute_spectrum(
    cfg: PlateConfig,
    p: DensityField,
    grid: Optional[PanelGrid] = None,
    n_eig: Optional[int] = None,
    check: bool = True,
) -> Spectrum:
    """Assemble and solve the weighted eigenproblem for density `p`.

    Keeps the `n_eig` smallest eigenpairs per parity, M by default: beyond
    index M a parity block only holds higher y-families, while the true
    next modes would need sin((M+1) x).
    """
    grid = spectrum_grid(cfg, p) if grid is None else grid
    if check:
        check_admissible(p, cfg, grid)
    basis = SpectralBasis(cfg.M, cfg.K, cfg.ell)
    n_eig = cfg.M if n_eig is None else int(n_eig)
    if n_eig < 1:
        raise ValueError("n_eig must be >= 1")
    A = assemble_stiffness(basis, cfg)
    B = assemble_mass(basis, p, grid)
    raw = []
    for parity in (LONGITUDINAL, TORSIONAL):
        idx = basis.block_index(parity)
        if p.x_dependent:
            blocks = [idx]
        else:
            blocks = [idx[basis.m_of[idx] == m] for m in range(1, basis.M + 1)]
        for sub in blocks:
            ix = np.ix_(sub, sub)
            vals, vecs = solve_spectrum(A[ix], B[ix], min(n_eig, len(sub)))
            raw.append(RawEigenpairs(parity, sub, vals, vecs))
    spec = label_and_normalize(raw, p, grid, basis, B, cfg.x_samples)
    spec = Spectrum([q for q in spec.pairs if q.index <= n_eig], basis, p, grid, B)
    logger.debug("spectrum %s: nu1=%.6g mu1=%.6g", p.name, spec.nu(1), spec.mu(1))
    return spec


@dataclass
class ConvergenceReport:
    density: str
    coarse: dict
    fine: dict
    relative_change: dict
    tolerance: float
    ok: bool


def convergence_check(cfg: PlateConfig, p: DensityField, tolerance: float = 1e-3) -> ConvergenceReport:
    """Compare nu_1, nu_2, mu_10 at (M, K) and at (M+10, K+2)."""
    fine_cfg = cfg.replace(M=cfg.M + 10, K=cfg.K + 2)
    out = {}
    for tag, c in (("coarse", cfg), ("fine", fine_cfg)):
        s = compute_spectrum(c, p, check=False)
        out[tag] = {"nu1": s.nu(1), "nu2": s.nu(2), "mu10": s.mu(10)}
    change = {k: abs(out["fine"][k] - out["coarse"][k]) / abs(out["coarse"][k]) for k in out["coarse"]}
    ok = max(change.values()) <= tolerance
    if not ok:
        warnings.warn(f"{p.name}: eigenvalues changed by up to {max(change.values()):.2e} under refinement")
    return ConvergenceReport(p.name, out["coarse"], out["fine"], change, tolerance, ok)
