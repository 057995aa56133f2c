"""Special functions and spectral data for spheres and tori.

Gegenbauer and Jacobi polynomials are evaluated by their forward three-term
recurrences, which are stable on [-1, 1] for the degrees this package uses.
Eigenspace dimensions are computed in exact integer arithmetic and only
converted to float by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError, ResourceLimit

# |t| may exceed 1 by this much (unit-vector dot products) before rejection
_T_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class SphereEigen:
    """Laplace eigendata of the d-sphere at degree ell.

    lam is the eigenvalue ell*(ell+d-1); mult the eigenspace dimension,
    kept as an exact integer.
    """

    ell: int
    lam: float
    mult: int


def _clamped(t: float) -> float:
    if abs(t) > 1.0 + _T_CLAMP_TOL:
        raise DomainError(f"argument {t!r} outside [-1, 1]")
    return min(1.0, max(-1.0, t))


def gegenbauer_eval(lambda_param: float, ell: int, t: float) -> float:
    """Gegenbauer polynomial C_ell^(lambda)(t) by forward recurrence.

    Exact at t = 1 where the value is binom(ell + 2*lambda - 1, ell).
    """
    if lambda_param <= 0:
        raise DomainError("lambda_param must be positive")
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    t = _clamped(t)
    if ell == 0:
        return 1.0
    g_prev = 1.0
    g_curr = 2.0 * lambda_param * t
    for k in range(2, ell + 1):
        g_next = (2.0 * (k + lambda_param - 1.0) * t * g_curr
                  - (k + 2.0 * lambda_param - 2.0) * g_prev) / k
        g_prev, g_curr = g_curr, g_next
    return g_curr


def jacobi_eval(alpha: float, beta: float, ell: int, t: float) -> float:
    """Jacobi polynomial P_ell^(alpha,beta)(t); P_ell(1) = binom(ell+alpha, ell)."""
    if alpha <= -1 or beta <= -1:
        raise DomainError("alpha and beta must exceed -1")
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    t = _clamped(t)
    if ell == 0:
        return 1.0
    p_prev = 1.0
    p_curr = 0.5 * ((alpha + beta + 2.0) * t + (alpha - beta))
    for k in range(2, ell + 1):
        a = 2.0 * k * (k + alpha + beta) * (2.0 * k + alpha + beta - 2.0)
        b = (2.0 * k + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        c = ((2.0 * k + alpha + beta - 2.0) * (2.0 * k + alpha + beta - 1.0)
             * (2.0 * k + alpha + beta))
        d = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + alpha + beta)
        p_next = ((b + c * t) * p_curr - d * p_prev) / a
        p_prev, p_curr = p_curr, p_next
    return p_curr


def sphere_mult(d: int, ell: int) -> int:
    """Dimension of the degree-ell eigenspace on the d-sphere, exact integer."""
    if d < 2:
        raise DomainError("sphere dimension must be >= 2")
    if ell < 0:
        raise DomainError("degree must be nonnegative")
    if ell == 0:
        return 1
    high = math.comb(ell + d, d)
    low = math.comb(ell + d - 2, d) if ell >= 2 else 0
    return high - low


def sphere_eigen(d: int, ell: int) -> SphereEigen:
    """Eigenvalue ell*(ell+d-1) and multiplicity of degree ell on the d-sphere."""
    mult = sphere_mult(d, ell)
    return SphereEigen(ell=ell, lam=float(ell) * (ell + d - 1), mult=mult)


def zonal_eval(d: int, ell: int, t: float) -> float:
    """Zonal function Z_ell(t) = ((2*ell+d-1)/(d-1)) * C_ell^((d-1)/2)(t).

    Z_ell(cos rho(x,y)) sums the products of any orthonormal eigenbasis at
    x and y; Z_ell(1) equals the eigenspace dimension.
    """
    if d < 2:
        raise DomainError("sphere dimension must be >= 2")
    pref = (2.0 * ell + d - 1.0) / (d - 1.0)
    return pref * gegenbauer_eval(0.5 * (d - 1), ell, t)


def log_gamma_ratio(a: float, b: float) -> float:
    """log(Gamma(a) / Gamma(b)) for positive a, b."""
    if a <= 0 or b <= 0:
        raise DomainError("gamma ratio requires positive arguments")
    return math.lgamma(a) - math.lgamma(b)


@dataclass(frozen=True)
class LatticeShell:
    """Nonzero integer vectors of one common squared Euclidean norm."""

    norm_sq: int
    vectors: np.ndarray  # shape (count, d), int64


class LatticeShellIter:
    """All nonzero k in Z^d with |k| <= max_norm, grouped by squared norm.

    Shells are produced in increasing |k|; within a shell vectors are in
    lexicographic order.  Total point count is capped.
    """

    def __init__(self, dim: int, max_norm: float, max_points: int = 1_000_000):
        if dim < 1:
            raise DomainError("lattice dimension must be >= 1")
        if dim > 4:
            raise DomainError("lattice enumeration supports d <= 4")
        if max_norm < 1:
            raise DomainError("max_norm must be >= 1")
        self.dim = dim
        self.max_norm = float(max_norm)
        self.max_points = int(max_points)
        self._shells = self._enumerate()

    def _enumerate(self) -> list[LatticeShell]:
        r = int(math.floor(self.max_norm))
        axes = np.arange(-r, r + 1, dtype=np.int64)
        est = (2 * r + 1) ** self.dim
        if est - 1 > self.max_points:
            raise ResourceLimit(
                f"lattice window holds ~{est - 1} points, cap is {self.max_points}"
            )
        grids = np.meshgrid(*([axes] * self.dim), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        nsq = (pts.astype(np.int64) ** 2).sum(axis=1)
        limit = self.max_norm * self.max_norm * (1.0 + 1e-15)
        keep = (nsq > 0) & (nsq <= limit)
        pts, nsq = pts[keep], nsq[keep]
        order = np.lexsort(tuple(pts[:, c] for c in range(self.dim - 1, -1, -1)))
        order = order[np.argsort(nsq[order], kind="stable")]
        pts, nsq = pts[order], nsq[order]
        # nsq is sorted: shells are contiguous slices
        uniq, starts = np.unique(nsq, return_index=True)
        bounds = np.append(starts, nsq.shape[0])
        return [LatticeShell(int(val), pts[lo:hi])
                for val, lo, hi in zip(uniq, bounds[:-1], bounds[1:])]

    def __iter__(self) -> Iterator[LatticeShell]:
        return iter(self._shells)

    def __len__(self) -> int:
        return len(self._shells)

    @property
    def total_points(self) -> int:
        return sum(s.vectors.shape[0] for s in self._shells)

    def all_vectors(self) -> np.ndarray:
        """Concatenated (count, d) array, shells in order."""
        if not self._shells:
            return np.empty((0, self.dim), dtype=np.int64)
        return np.concatenate([s.vectors for s in self._shells], axis=0)


def lattice_shells(d: int, max_norm: float, max_points: int = 1_000_000) -> LatticeShellIter:
    """Enumerate nonzero lattice vectors with |k| <= max_norm, by shell."""
    return LatticeShellIter(d, max_norm, max_points=max_points)
