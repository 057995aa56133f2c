"""Measure representations and their spectral data.

Discrete measures live on the unit torus (coordinates in [0,1)^d, geodesic
distance through the nearest lattice shift) or on the unit d-sphere (unit
vectors in R^{d+1}).  The normalized volume measure is a distinguished
symbolic value: its torus Fourier coefficients vanish away from zero and its
sphere harmonic energies vanish for every positive degree.

Spectral difference tables are the inputs of the bound evaluators.  A table
records exact coefficient differences over a finite window together with a
certified majorant of everything omitted; the majorant is tied to the tail
rule (heat flow time, supremum-norm smoothing width) the table was built
for and stays valid when a bound is evaluated at a larger smoothing
parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _tails
from ._kernels import zonal_series
from .errors import DimensionMismatch, DomainError, ResourceLimit
from .spectral import lattice_shells

_WEIGHT_TOL = 1e-9
_NORM_TOL = 1e-9
_NEG_ENERGY_TOL = 1e-9

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UniformVol:
    """The normalized volume measure, handled symbolically."""

    space: str
    dim: int

    def __post_init__(self):
        if self.space not in ("torus", "sphere"):
            raise DomainError(f"unknown space {self.space!r}")
        if self.dim < 1 or (self.space == "sphere" and self.dim < 2):
            raise DomainError("invalid dimension")


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Weighted point set on the torus or the sphere.

    Torus coordinates are reduced mod 1 on ingestion; sphere points must be
    unit vectors up to 1e-9 and are renormalized.  Weights must be
    nonnegative and sum to one up to 1e-9; they are rescaled to sum to one
    exactly.
    """

    space: str
    dim: int
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.space not in ("torus", "sphere"):
            raise DomainError(f"unknown space {self.space!r}")
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        ambient = self.dim + 1 if self.space == "sphere" else self.dim
        if pts.ndim != 2 or pts.shape[1] != ambient:
            raise DimensionMismatch(
                f"points must be (n, {ambient}) for {self.space} of dimension {self.dim}"
            )
        if self.space == "torus":
            pts = np.mod(pts, 1.0)
        else:
            norms = np.linalg.norm(pts, axis=1)
            if np.any(np.abs(norms - 1.0) > _NORM_TOL):
                raise DomainError("sphere points must be unit vectors within 1e-9")
            pts = pts / norms[:, None]
        w = self.weights
        if w is None:
            w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        w = np.asarray(w, dtype=np.float64).ravel()
        if w.shape[0] != pts.shape[0]:
            raise DimensionMismatch("weights length must match point count")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise DomainError("weights must be finite and nonnegative")
        total = w.sum()
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise DomainError("weights must sum to 1 within 1e-9")
        w = w / total
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def on_torus(cls, points, weights=None) -> "DiscreteMeasure":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return cls("torus", pts.shape[1], pts, weights)

    @classmethod
    def on_sphere(cls, points, weights=None) -> "DiscreteMeasure":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return cls("sphere", pts.shape[1] - 1, pts, weights)

    @property
    def n_atoms(self) -> int:
        return self.points.shape[0]


Measure = Union[DiscreteMeasure, UniformVol]


def same_space(mu: Measure, nu: Measure) -> None:
    if mu.space != nu.space or mu.dim != nu.dim:
        raise DimensionMismatch("measures live on different spaces")


def measures_identical(mu: Measure, nu: Measure) -> bool:
    """Exact equality of representations (used to zero tail certificates)."""
    if isinstance(mu, UniformVol) and isinstance(nu, UniformVol):
        return mu.space == nu.space and mu.dim == nu.dim
    if isinstance(mu, UniformVol) or isinstance(nu, UniformVol):
        return False
    if mu.space != nu.space or mu.dim != nu.dim or mu.n_atoms != nu.n_atoms:
        return False
    order_m = np.lexsort(mu.points.T)
    order_n = np.lexsort(nu.points.T)
    return bool(
        np.array_equal(mu.points[order_m], nu.points[order_n])
        and np.array_equal(mu.weights[order_m], nu.weights[order_n])
    )


def is_vol(m: Measure) -> bool:
    return isinstance(m, UniformVol)


# ---------------------------------------------------------------------------
# JSON encoding (the CLI file format)
# ---------------------------------------------------------------------------

def measure_to_json(m: Measure) -> dict:
    if isinstance(m, UniformVol):
        return {"space": m.space, "dim": m.dim, "uniform": True}
    return {
        "space": m.space,
        "dim": m.dim,
        "points": m.points.tolist(),
        "weights": m.weights.tolist(),
    }


def measure_from_json(obj: dict) -> Measure:
    try:
        space = obj["space"]
        dim = int(obj["dim"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"measure object needs 'space' and 'dim': {exc}")
    if obj.get("uniform"):
        return UniformVol(space, dim)
    if "points" not in obj:
        raise DomainError("measure object needs 'points' unless 'uniform' is set")
    return DiscreteMeasure(space, dim, np.asarray(obj["points"], dtype=np.float64),
                           obj.get("weights"))


# ---------------------------------------------------------------------------
# torus Fourier data
# ---------------------------------------------------------------------------

def torus_fourier(m: Measure, k) -> complex:
    """Fourier coefficient integral of exp(-2 pi i <k, x>) against the measure."""
    k = np.asarray(k, dtype=np.int64).ravel()
    if m.space != "torus":
        raise DimensionMismatch("torus_fourier requires a torus measure")
    if k.shape[0] != m.dim:
        raise DimensionMismatch("frequency vector dimension mismatch")
    if isinstance(m, UniformVol):
        return 1.0 + 0.0j if not k.any() else 0.0 + 0.0j
    phase = -TWO_PI * (m.points @ k.astype(np.float64))
    return complex(np.sum(m.weights * np.exp(1j * phase)))


def _fourier_block(m: Measure, ks: np.ndarray) -> np.ndarray:
    """Coefficients for every row of ks, chunked to bound memory."""
    n = ks.shape[0]
    if isinstance(m, UniformVol):
        return np.zeros(n, dtype=np.complex128)
    out = np.empty(n, dtype=np.complex128)
    atoms = m.points
    w = m.weights
    chunk = max(1, 4_000_000 // max(1, atoms.shape[0]))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        phase = ks[lo:hi].astype(np.float64) @ atoms.T
        out[lo:hi] = np.exp(-2j * math.pi * phase) @ w
    return out


# tail rules -----------------------------------------------------------------

@dataclass(frozen=True)
class JacksonWindow:
    """Finite box sum: the bound's series is finite, no tail."""

    kind: str = field(default="jackson_window", init=False)


@dataclass(frozen=True)
class ProjectionWindow:
    """Finite degree sum for the sphere projection bound, no tail."""

    kind: str = field(default="projection_window", init=False)


@dataclass(frozen=True)
class HeatRule:
    """Heat-flow tail rule; certificates hold for any time >= t and the
    stated q0 = min(conjugate exponent, 2)."""

    t: float
    q0: float = 2.0
    rtol: float = 1e-12
    kind: str = field(default="heat", init=False)

    def __post_init__(self):
        if self.t <= 0:
            raise DomainError("heat rule requires t > 0")
        if not 1.0 <= self.q0 <= 2.0:
            raise DomainError("q0 must lie in [1, 2]")


@dataclass(frozen=True)
class WinfRule:
    """Supremum-norm tail rule; certificates hold for any width >= T."""

    T: float
    rtol: float = 1e-12
    kind: str = field(default="winf", init=False)

    def __post_init__(self):
        if self.T <= 0:
            raise DomainError("supremum-norm rule requires T > 0")


TailRule = Union[JacksonWindow, ProjectionWindow, HeatRule, WinfRule]


@dataclass(frozen=True, eq=False)
class TorusSpectrumDiff:
    """Coefficient differences over a lattice window plus a tail certificate.

    ks holds each nonzero frequency with |k| <= window exactly once, sorted
    by squared norm then lexicographically; diff[i] = mu_hat(k_i) - nu_hat(k_i).
    """

    dim: int
    window: float
    ks: np.ndarray
    norm_sq: np.ndarray
    diff: np.ndarray
    rule: TailRule
    tail_bound: float
    mu_is_vol: bool
    identical: bool

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(self.norm_sq.astype(np.float64))

    def entry(self, k) -> complex:
        k = np.asarray(k, dtype=np.int64).ravel()
        match = np.all(self.ks == k, axis=1).nonzero()[0]
        if match.size == 0:
            raise KeyError(f"frequency {k} outside the table window")
        return complex(self.diff[match[0]])


def torus_diff_table(mu: Measure, nu: Measure, max_norm: float,
                     tail_rule: TailRule,
                     max_points: int = 1_000_000) -> TorusSpectrumDiff:
    """Tabulate mu_hat - nu_hat over a lattice ball and certify the tail.

    For the finite-sum rules the window is exactly max_norm.  For heat and
    supremum-norm rules the window grows until the certified tail majorant
    is at most rule.rtol times the retained (reference-weighted) sum, or a
    resource cap is hit.
    """
    same_space(mu, nu)
    if mu.space != "torus":
        raise DimensionMismatch("torus_diff_table requires torus measures")
    d = mu.dim
    identical = measures_identical(mu, nu)

    def build(window: float):
        shells = lattice_shells(d, window, max_points=max_points)
        ks = shells.all_vectors()
        nsq = (ks.astype(np.int64) ** 2).sum(axis=1)
        diff = _fourier_block(mu, ks) - _fourier_block(nu, ks)
        return ks, nsq, diff

    if isinstance(tail_rule, ProjectionWindow):
        raise DomainError("projection window applies to sphere energy tables")

    if isinstance(tail_rule, JacksonWindow):
        ks, nsq, diff = build(max_norm)
        return TorusSpectrumDiff(d, float(max_norm), ks, nsq, diff, tail_rule,
                                 0.0, is_vol(mu), identical)

    window = float(max_norm)
    while True:
        ks, nsq, diff = build(window)
        norms = np.sqrt(nsq.astype(np.float64))
        absdiff = np.abs(diff)
        if isinstance(tail_rule, HeatRule):
            weights = np.exp(-4.0 * math.pi ** 2 * nsq * tail_rule.q0 * tail_rule.t)
            retained = float(weights @ (absdiff / (TWO_PI * norms)) ** tail_rule.q0)
            tail = _tails.heat_tail_torus(d, window, tail_rule.t, tail_rule.q0)
        elif isinstance(tail_rule, WinfRule):
            aw = _tails.winf_weight_torus_sup_vec(d, tail_rule.T, norms)
            retained = float(aw @ (absdiff / (TWO_PI * norms)))
            tail = _tails.winf_tail_torus(d, tail_rule.T, window)
        else:
            raise DomainError(f"unknown tail rule {tail_rule!r}")
        if identical:
            tail = 0.0
        if tail <= tail_rule.rtol * retained or tail <= 1e-250:
            return TorusSpectrumDiff(d, window, ks, nsq, diff, tail_rule, tail,
                                     is_vol(mu), identical)
        grown = max(window * 1.4, window + 1.0)
        est = (2.0 * grown + 1.0) ** d
        if est - 1 > max_points:
            raise ResourceLimit(
                f"tail target {tail_rule.rtol:g} unreachable within "
                f"{max_points} lattice points (window {window:g}, tail {tail:g}, "
                f"retained {retained:g})"
            )
        window = grown


# ---------------------------------------------------------------------------
# sphere harmonic energies
# ---------------------------------------------------------------------------

def _energy_array(mu: Measure, nu: Measure, lmax: int) -> np.ndarray:
    """E_l for l = 0..lmax via zonal bilinear sums (basis independent)."""
    if measures_identical(mu, nu):
        return np.zeros(lmax + 1)
    blocks_t = []
    blocks_c = []

    def add_block(a: DiscreteMeasure, b: DiscreteMeasure, sign: float):
        gram = np.clip(a.points @ b.points.T, -1.0, 1.0).ravel()
        coef = sign * np.outer(a.weights, b.weights).ravel()
        blocks_t.append(gram)
        blocks_c.append(coef)

    if isinstance(mu, DiscreteMeasure):
        add_block(mu, mu, 1.0)
    if isinstance(nu, DiscreteMeasure):
        add_block(nu, nu, 1.0)
    if isinstance(mu, DiscreteMeasure) and isinstance(nu, DiscreteMeasure):
        add_block(mu, nu, -2.0)
    if not blocks_t:
        return np.zeros(lmax + 1)
    tvals = np.concatenate(blocks_t)
    coefs = np.concatenate(blocks_c)
    d = mu.dim
    energies = zonal_series(tvals, coefs, d, lmax)
    # degree zero always cancels for probability measures
    energies[0] = 0.0
    small_neg = (energies < 0) & (energies >= -_NEG_ENERGY_TOL)
    energies[small_neg] = 0.0
    if np.any(energies < 0):
        worst = float(energies.min())
        raise DomainError(
            f"harmonic energy {worst:g} below -1e-9: inconsistent inputs"
        )
    return energies


def sphere_energy(mu: Measure, nu: Measure, ell: int) -> float:
    """Degree-ell harmonic energy of mu - nu (squared coefficient mass)."""
    same_space(mu, nu)
    if mu.space != "sphere":
        raise DimensionMismatch("sphere_energy requires sphere measures")
    if mu.dim < 2:
        raise DomainError("sphere dimension must be >= 2")
    if ell < 1:
        raise DomainError("degree must be >= 1 (degree 0 cancels exactly)")
    return float(_energy_array(mu, nu, ell)[ell])


@dataclass(frozen=True, eq=False)
class SphereEnergySeq:
    """Harmonic energies E_l for 1 <= l <= max_ell plus a tail certificate."""

    dim: int
    energies: np.ndarray  # index 0 <-> degree 1
    rule: TailRule
    tail_bound: float
    mu_is_vol: bool
    identical: bool

    @property
    def max_ell(self) -> int:
        return int(self.energies.shape[0])

    def energy(self, ell: int) -> float:
        if not 1 <= ell <= self.max_ell:
            raise KeyError(f"degree {ell} outside table")
        return float(self.energies[ell - 1])


def sphere_energy_seq(mu: Measure, nu: Measure, max_ell: int,
                      tail_rule: TailRule,
                      max_degree: int = 10_000) -> SphereEnergySeq:
    """Energy table with rule-certified tail; degrees grow as needed."""
    same_space(mu, nu)
    if mu.space != "sphere":
        raise DimensionMismatch("sphere_energy_seq requires sphere measures")
    d = mu.dim
    if d < 2:
        raise DomainError("sphere dimension must be >= 2")
    if max_ell < 1:
        raise DomainError("max_ell must be >= 1")
    identical = measures_identical(mu, nu)

    if isinstance(tail_rule, JacksonWindow):
        raise DomainError("jackson window applies to torus tables")
    if isinstance(tail_rule, ProjectionWindow):
        energies = _energy_array(mu, nu, max_ell)[1:]
        return SphereEnergySeq(d, energies, tail_rule, 0.0, is_vol(mu), identical)

    lmax = int(max_ell)
    while True:
        energies = _energy_array(mu, nu, lmax)[1:]
        lams = np.arange(1, lmax + 1, dtype=np.float64)
        lams = lams * (lams + d - 1)
        mults = _sphere_mults(d, lmax)
        if isinstance(tail_rule, HeatRule):
            w = np.exp(-lams * tail_rule.q0 * tail_rule.t) * mults
            retained = float(w @ (energies / (mults * lams)) ** (0.5 * tail_rule.q0))
            tail = _tails.heat_tail_sphere(d, lmax, tail_rule.t, tail_rule.q0)
        elif isinstance(tail_rule, WinfRule):
            aw = np.array([_tails.winf_weight_sphere_sup(d, tail_rule.T, ell)
                           for ell in range(1, lmax + 1)])
            retained = float(aw @ np.sqrt(mults * energies / lams))
            tail = _tails.winf_tail_sphere(d, tail_rule.T, lmax)
        else:
            raise DomainError(f"unknown tail rule {tail_rule!r}")
        if identical:
            tail = 0.0
        if tail <= tail_rule.rtol * retained or tail <= 1e-250:
            return SphereEnergySeq(d, energies, tail_rule, tail, is_vol(mu), identical)
        grown = max(int(lmax * 1.4), lmax + 8)
        if grown > max_degree:
            raise ResourceLimit(
                f"tail target {tail_rule.rtol:g} unreachable within degree cap "
                f"{max_degree} (at degree {lmax}: tail {tail:g}, retained {retained:g})"
            )
        lmax = grown


def _sphere_mults(d: int, lmax: int) -> np.ndarray:
    """Multiplicities for degrees 1..lmax as floats."""
    from .spectral import sphere_mult

    return np.array([float(sphere_mult(d, ell)) for ell in range(1, lmax + 1)])


# ---------------------------------------------------------------------------
# generic spectra (manifold evaluators), including the torus flattening
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GenericSpectrumDiff:
    """Eigenvalue list with coefficient-difference magnitudes.

    eigenvalues are positive and nondecreasing, diffs the matching
    |mu_hat - nu_hat|.  Tables flattened from a torus window carry the
    window metadata so manifold bounds can certify their tails; tables from
    user-supplied spectra have no certificate (tail_bound 0, flagged in the
    reports).
    """

    eigenvalues: np.ndarray
    diffs: np.ndarray
    tail_bound: float = 0.0
    torus_window: Optional[tuple] = None  # (dim, window, rule)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=np.float64).ravel()
        df = np.asarray(self.diffs, dtype=np.float64).ravel()
        if lam.shape != df.shape:
            raise DimensionMismatch("eigenvalues and diffs must have equal length")
        if lam.size and (np.any(lam <= 0) or np.any(np.diff(lam) < 0)):
            raise DomainError("eigenvalues must be positive and nondecreasing")
        if np.any(df < 0):
            raise DomainError("coefficient differences must be nonnegative")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "diffs", df)

    def shell_floor(self) -> np.ndarray:
        """Shell index floor(sqrt(eigenvalue)) per entry."""
        return np.floor(np.sqrt(self.eigenvalues)).astype(np.int64)


def generic_diff_from_torus(mu: Measure, nu: Measure, max_norm: float,
                            tail_rule: Optional[TailRule] = None,
                            max_points: int = 1_000_000) -> GenericSpectrumDiff:
    """Flatten a torus table into eigenvalue/difference lists.

    Eigenvalues are 4 pi^2 |k|^2 with multiplicity preserved.  When a heat
    rule is given the certified torus tail transfers verbatim (the two
    series agree entry by entry for q0 = 2).
    """
    rule = tail_rule if tail_rule is not None else JacksonWindow()
    table = torus_diff_table(mu, nu, max_norm, rule, max_points=max_points)
    lam = 4.0 * math.pi ** 2 * table.norm_sq.astype(np.float64)
    order = np.argsort(lam, kind="stable")
    return GenericSpectrumDiff(
        eigenvalues=lam[order],
        diffs=np.abs(table.diff)[order],
        tail_bound=table.tail_bound,
        torus_window=(table.dim, table.window, table.rule),
    )
