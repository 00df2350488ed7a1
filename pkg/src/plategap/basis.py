"""Separated basis sin(m x) q_k(y) on the hinged-free plate."""
from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import legendre

LONGITUDINAL = "longitudinal"
TORSIONAL = "torsional"


class SpectralBasis:
    """Functions phi_{m,k}(x, y) = sin(m x) q_k(y), m = 1..M, k = 0..K.

    q_k is the Legendre polynomial P_k(y / ell), scaled to unit L2 norm on
    (-ell, ell). Even k span the y-even (longitudinal) block, odd k the
    y-odd (torsional) block. Flat index is m-major: i = (m-1)(K+1) + k.
    """

    def __init__(self, M: int, K: int, ell: float):
        self.M, self.K, self.ell = int(M), int(K), float(ell)
        self.size = self.M * (self.K + 1)
        k = np.tile(np.arange(self.K + 1), self.M)
        self.m_of = np.repeat(np.arange(1, self.M + 1), self.K + 1)
        self.k_of = k
        self.even_index = np.flatnonzero(k % 2 == 0)
        self.odd_index = np.flatnonzero(k % 2 == 1)

    def flat(self, m: int, k: int) -> int:
        return (m - 1) * (self.K + 1) + k

    def block_index(self, parity: str) -> np.ndarray:
        return self.odd_index if parity == TORSIONAL else self.even_index

    def sines(self, x) -> np.ndarray:
        """sin(m x) for m = 1..M, shape x.shape + (M,); exact zeros on the hinged edges."""
        x = np.asarray(x, dtype=float)
        s = np.sin(x[..., None] * np.arange(1, self.M + 1))
        edge = (x == 0.0) | (x == math.pi)
        s[edge] = 0.0
        return s

    def cosines(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.cos(x[..., None] * np.arange(1, self.M + 1))

    def ypoly(self, y, derivative: int = 0) -> np.ndarray:
        """q_k^(d)(y) for k = 0..K, shape y.shape + (K+1,)."""
        y = np.asarray(y, dtype=float)
        s = y / self.ell
        out = np.empty(y.shape + (self.K + 1,))
        for k in range(self.K + 1):
            c = np.zeros(k + 1)
            c[k] = math.sqrt((2 * k + 1) / (2 * self.ell))
            if derivative:
                c = legendre.legder(c, derivative) / self.ell**derivative
            out[..., k] = legendre.legval(s, c)
        return out

    def as_grid(self, coeffs) -> np.ndarray:
        """Reshape flat coefficients (..., size) to (..., M, K+1)."""
        c = np.asarray(coeffs, dtype=float)
        return c.reshape(c.shape[:-1] + (self.M, self.K + 1))

    def evaluate_grid(self, coeffs, x, y) -> np.ndarray:
        """Values on the tensor grid x (nx,) times y (ny,): shape (..., nx, ny)."""
        C = self.as_grid(coeffs)
        return self.sines(x) @ (C @ self.ypoly(y).T)

    def evaluate(self, coeffs, x, y) -> np.ndarray:
        """Values at broadcast points (x, y) for a single coefficient vector."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        C = self.as_grid(coeffs)
        S = self.sines(x.ravel())
        Q = self.ypoly(y.ravel())
        return np.einsum("pm,mk,pk->p", S, C, Q, optimize=True).reshape(x.shape)

    def trace(self, coeffs, x, y: float | None = None) -> np.ndarray:
        """Restriction to the line y = const (default the free edge y = ell): shape (..., nx)."""
        y = self.ell if y is None else y
        return self.evaluate_grid(coeffs, x, np.array([y]))[..., 0]
