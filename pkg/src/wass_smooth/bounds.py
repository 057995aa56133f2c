"""Evaluators for the explicit smoothing inequalities, plus the shared
constant factories and a deterministic free-parameter optimizer.

Every evaluator returns a BoundReport whose value decomposes exactly as
c1_term + fourier_term + tail_contribution.  The smoothing parameter is
free in each inequality ("for any H / t / L / T"), so the optimizer scans a
deterministic grid and refines; any reported value is a valid upper bound
on the corresponding Wasserstein distance whenever `valid` is set.

Hypothesis violations raise InvalidHypothesis, except in the
supremum-norm evaluators which return an invalid report with the violated
range spelled out, so optimizers can scan T ranges that are only partially
admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _tails
from .errors import (DomainError, InsufficientWindow, InvalidHypothesis,
                     MissingConstants, NoValidPoint, TailCertificateMissing)
from .measures import (GenericSpectrumDiff, HeatRule, SphereEnergySeq,
                       TorusSpectrumDiff, WinfRule, TWO_PI)
from .spectral import log_gamma_ratio, sphere_mult

_DELTA_SWITCH = 1e-9  # relative |c - delta| below which the limit form is used


# ---------------------------------------------------------------------------
# parameters and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    """Shared hypotheses of the finite-p bounds.

    c is the density lower-bound assertion (first measure dominates c Vol);
    b and r assert that the second measure gives every radius-r ball mass at
    least b.  All three are caller assertions, not verified here.
    """

    p: float
    c: float = 0.0
    b: float = 0.0
    r: float = 0.0
    d: int = 1

    def __post_init__(self):
        if not (self.p >= 1.0 and math.isfinite(self.p)):
            raise DomainError("requires 1 <= p < ∞")
        if not 0.0 <= self.c <= 1.0:
            raise DomainError("requires c in [0, 1]")
        if self.b < 0:
            raise DomainError("requires b >= 0")
        if self.b > 0 and self.r <= 0:
            raise DomainError("requires r > 0 when b > 0")
        if self.d < 1:
            raise DomainError("requires d >= 1")

    @property
    def q(self) -> float:
        return math.inf if self.p == 1.0 else self.p / (self.p - 1.0)

    @property
    def q0(self) -> float:
        return min(self.q, 2.0)

    def require_c(self) -> None:
        if self.p > 1.0 and self.c <= 0.0:
            raise InvalidHypothesis("requires c > 0 when p > 1")


@dataclass
class BoundReport:
    """Value and audit trail of one bound evaluation."""

    bound: str
    value: float
    smoothing_param: float
    c1_term: float
    fourier_term: float
    tail_contribution: float
    constants: dict
    valid: bool = True
    reason: str = ""
    vacuous: bool = False

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "value": self.value,
            "smoothing_param": self.smoothing_param,
            "c1_term": self.c1_term,
            "fourier_term": self.fourier_term,
            "tail_contribution": self.tail_contribution,
            "constants": self.constants,
            "valid": self.valid,
            "reason": self.reason,
            "vacuous": self.vacuous,
        }


def _invalid(bound: str, param: float, reason: str) -> BoundReport:
    return BoundReport(bound, math.inf, param, 0.0, 0.0, 0.0, {},
                       valid=False, reason=reason)


@dataclass(frozen=True)
class ManifoldConstants:
    """Geometry inputs of the generic manifold bounds.

    ricci_a is the A with Ricci curvature bounded below by -(d-1) A; the
    Weyl and Poincare constants are user inputs needed only for p > 2.
    """

    ricci_a: float = 0.0
    diam: float = 0.0
    k_weyl: float = 0.0
    k_poincare: float = 0.0

    def __post_init__(self):
        if self.ricci_a < 0:
            raise DomainError("requires A >= 0")


# ---------------------------------------------------------------------------
# constant factories
# ---------------------------------------------------------------------------

def c2_factor(p: float, c: float, delta: float) -> float:
    """p (c^{1/p} - delta^{1/p}) / (c - delta), continuous through delta = c
    where its value is the limit c^{-1/q}."""
    if p <= 1.0:
        raise DomainError("requires p > 1")
    if c <= 0.0:
        raise DomainError("requires c > 0")
    if delta < 0.0 or delta > c:
        raise DomainError("requires 0 <= delta <= c")
    if abs(c - delta) < _DELTA_SWITCH * c:
        return c ** (1.0 / p - 1.0)
    if delta == 0.0:
        return p * c ** (1.0 / p) / c
    # c^{1/p} - delta^{1/p} = -c^{1/p} expm1(log(delta/c)/p), cancellation-free
    diff_roots = -(c ** (1.0 / p)) * math.expm1(math.log1p((delta - c) / c) / p)
    return p * diff_roots / (c - delta)


def winf_c2_factor(c: float, delta: float) -> float:
    """(log c - log delta) / (c - delta) with limit 1/c at delta = c."""
    if c <= 0.0 or delta <= 0.0:
        raise DomainError("requires c > 0 and delta > 0")
    if delta > c:
        raise DomainError("requires delta <= c")
    if abs(c - delta) < _DELTA_SWITCH * c:
        return 1.0 / c
    return -math.log1p((delta - c) / c) / (c - delta)


def _one_minus_c_root(c: float, p: float) -> float:
    return 0.0 if c >= 1.0 else (1.0 - c) ** (1.0 / p)


def c1_heat_torus(d: int, p: float, c: float) -> float:
    """2 (1 + (1-c)^{1/p}) (Gamma((d+p)/2) / Gamma(d/2))^{1/p}."""
    return 2.0 * (1.0 + _one_minus_c_root(c, p)) * math.exp(
        log_gamma_ratio(0.5 * (d + p), 0.5 * d) / p
    )


def _c1_sqrt2d(d: int, p: float, c: float) -> float:
    return math.sqrt(2.0) * (1.0 + _one_minus_c_root(c, p)) * math.sqrt(d)


def _c1_gt2(d: int, p: float, c: float) -> float:
    return (1.0 + _one_minus_c_root(c, p)) * math.sqrt(2.0 * d + p)


def heat_delta(d: int, t: float, r: float, b: float, c: float) -> float:
    """min(b e^{-r^2/(4t)} / (4 pi t)^{d/2}, c): flat heat-kernel floor."""
    if b <= 0.0:
        return 0.0
    logv = math.log(b) - r * r / (4.0 * t) - 0.5 * d * math.log(4.0 * math.pi * t)
    return min(math.exp(min(logv, 700.0)), c)


def heat_lower_delta(ricci_a: float, d: int, t: float, r: float,
                     b: float, c: float) -> float:
    """Ball-mass floor from the curvature-dependent heat kernel lower bound.

    The inner supremum over sigma > 0 has the closed stationary form
    sigma* = sqrt(beta/alpha) with alpha the coefficient of sigma and beta
    that of 1/sigma; at A = 0 the supremum is the sigma -> 0 limit.
    """
    if ricci_a < 0:
        raise DomainError("requires A >= 0")
    if b < 0:
        raise DomainError("requires b >= 0")
    if c <= 0:
        raise DomainError("requires c > 0")
    if t <= 0:
        raise DomainError("requires t > 0")
    if b == 0.0:
        return 0.0
    if ricci_a == 0.0:
        return heat_delta(d, t, r, b, c)
    alpha = r * r / math.sqrt(18.0 * t) + 2.0 * d * math.sqrt(2.0 * t) / 3.0
    beta = (d - 1.0) ** 2 * ricci_a * math.sqrt(2.0 * t) / 4.0
    penalty = 2.0 * math.sqrt(alpha * beta)
    logv = (math.log(b) - 0.5 * d * math.log(4.0 * math.pi * t)
            - r * r / (4.0 * t) - (d - 1.0) ** 2 * ricci_a * t / 4.0 - penalty)
    return min(math.exp(min(logv, 700.0)), c)


def design_bound(d: int, p: float, t: int) -> float:
    """The design corollary constant over the strength: 14 d max(d log(100d), p) / t."""
    if d < 2 or p < 1 or t < 1:
        raise DomainError("requires d >= 2, p >= 1, t >= 1")
    return 14.0 * d * max(d * math.log(100.0 * d), p) / t


# ---------------------------------------------------------------------------
# report assembly helpers
# ---------------------------------------------------------------------------

def _root_terms(retained: float, tail: float, q0: float, c2: float):
    """Split c2 (retained + tail)^{1/q0} into main and certified add-on."""
    fourier = c2 * retained ** (1.0 / q0)
    total = c2 * (retained + tail) ** (1.0 / q0)
    return fourier, max(total - fourier, 0.0)


def _finish(report: BoundReport, diam: float) -> BoundReport:
    report.vacuous = bool(report.value > diam)
    report.constants["diameter"] = diam
    return report


# ---------------------------------------------------------------------------
# torus bounds
# ---------------------------------------------------------------------------

def bound_torus_jackson(diff: TorusSpectrumDiff, params: BoundParams,
                        H: int) -> BoundReport:
    """Polynomial-kernel torus bound: C1/(H - H0) plus a finite box sum."""
    p, d = params.p, diff.dim
    params.require_c()
    h0 = 1.0 if p <= 2.0 else 0.5 * (p + 2.0)
    if H != int(H) or H <= h0:
        raise InvalidHypothesis(f"requires integer H > H0 = {h0:g}")
    H = int(H)
    if diff.window + 1e-9 < H * math.sqrt(d):
        raise InsufficientWindow(
            f"requires the table window to cover [-H, H]^{d} (need |k| <= {H * math.sqrt(d):g})"
        )
    q0 = params.q0
    cheb = np.max(np.abs(diff.ks), axis=1)
    sel = cheb <= H
    norms = diff.norms[sel]
    absdiff = np.abs(diff.diff[sel])
    retained = float(np.sum((absdiff / (TWO_PI * norms)) ** q0))
    c1 = (_c1_sqrt2d(d, p, params.c) if p <= 2.0
          else (1.0 + _one_minus_c_root(params.c, p)) * (p + 4.0) * math.sqrt(d) / math.sqrt(6.0))
    c2 = 1.0 if p == 1.0 else p * params.c ** (-1.0 / params.q)
    fourier, tail_c = _root_terms(retained, 0.0, q0, c2)
    c1_term = c1 / (H - h0)
    report = BoundReport(
        "torus_jackson", c1_term + fourier + tail_c, float(H), c1_term, fourier,
        tail_c, {"C1": c1, "C2": c2, "H0": h0, "q0": q0, "tail_certified": True},
    )
    return _finish(report, 0.5 * math.sqrt(d))


def _check_heat_rule(rule, t: float, q0: float) -> None:
    if not isinstance(rule, HeatRule):
        raise TailCertificateMissing("table was not built with a heat tail rule")
    if rule.t > t * (1.0 + 1e-12):
        raise TailCertificateMissing(
            f"table heat certificate starts at t = {rule.t:g} > requested {t:g}"
        )
    if rule.q0 > q0 + 1e-12:
        raise TailCertificateMissing(
            f"table heat certificate uses q0 = {rule.q0:g} > requested {q0:g}"
        )


def bound_torus_heat(diff: TorusSpectrumDiff, params: BoundParams,
                     t: float) -> BoundReport:
    """Heat-kernel torus bound: C1 sqrt(t) plus a Gaussian-weighted series."""
    p, d = params.p, diff.dim
    params.require_c()
    if t <= 0:
        raise InvalidHypothesis("requires t > 0")
    q0 = params.q0
    _check_heat_rule(diff.rule, t, q0)
    norms = diff.norms
    weights = np.exp(-4.0 * math.pi ** 2 * diff.norm_sq * q0 * t)
    retained = float(weights @ (np.abs(diff.diff) / (TWO_PI * norms)) ** q0)
    delta = heat_delta(d, t, params.r, params.b, params.c)
    c1 = c1_heat_torus(d, p, params.c)
    c2 = 1.0 if p == 1.0 else c2_factor(p, params.c, delta)
    fourier, tail_c = _root_terms(retained, diff.tail_bound, q0, c2)
    c1_term = c1 * math.sqrt(t)
    report = BoundReport(
        "torus_heat", c1_term + fourier + tail_c, t, c1_term, fourier, tail_c,
        {"C1": c1, "C2": c2, "delta": delta, "q0": q0, "tail_certified": True},
    )
    return _finish(report, 0.5 * math.sqrt(d))


def _winf_weights_torus_vec(d: int, T: float, norms: np.ndarray) -> np.ndarray:
    kappa = (d + 1.0) / (4.0 * math.log(2.0))
    cut = (d + 3.0) / (math.pi * T)
    out = np.ones_like(norms)
    beyond = norms >= cut
    if np.any(beyond):
        n = norms[beyond]
        u = np.log(math.pi * T * n / (d + 3.0))
        v = np.log(math.e ** 2 * math.pi * T * n / (d + 2.0))
        out[beyond] = np.exp(np.maximum(-kappa * u * v, -745.0))
    return out


def torus_winf_delta(d: int, T: float, b: float, c: float) -> float:
    """min(b Gamma((d+2)/2) 2^{d+1} / (27 pi^{d/2} T^d), c)."""
    logv = (math.log(b) + math.lgamma(0.5 * (d + 2.0)) + (d + 1.0) * math.log(2.0)
            - math.log(27.0) - 0.5 * d * math.log(math.pi) - d * math.log(T))
    return min(math.exp(min(logv, 700.0)), c)


def bound_torus_winf(diff: TorusSpectrumDiff, c: float, b: float, r: float,
                     d: int, T: float) -> BoundReport:
    """Supremum-norm torus bound via a compactly supported bump kernel.

    Range violations yield an invalid report (not an exception) so the
    optimizer can scan T intervals.
    """
    name = "torus_winf"
    if d != diff.dim:
        raise InvalidHypothesis("requires the table dimension to match d")
    if c <= 0:
        return _invalid(name, T, "requires c > 0")
    if b <= 0:
        return _invalid(name, T, "requires b > 0")
    if r <= 0:
        return _invalid(name, T, "requires r > 0")
    if T < 5.0 * r:
        return _invalid(name, T, "requires T ≥ 5r")
    if not isinstance(diff.rule, WinfRule):
        raise TailCertificateMissing("table was not built with a supremum-norm rule")
    if diff.rule.T > T * (1.0 + 1e-12):
        raise TailCertificateMissing(
            f"table certificate starts at T = {diff.rule.T:g} > requested {T:g}"
        )
    norms = diff.norms
    aw = _winf_weights_torus_vec(d, T, norms)
    retained = float(aw @ (np.abs(diff.diff) / (TWO_PI * norms)))
    delta = torus_winf_delta(d, T, b, c)
    c1 = 1.0 + (0.0 if diff.mu_is_vol else 1.0)
    c2 = winf_c2_factor(c, delta)
    fourier = c2 * retained
    tail_c = c2 * diff.tail_bound
    c1_term = c1 * T
    report = BoundReport(
        name, c1_term + fourier + tail_c, T, c1_term, fourier, tail_c,
        {"C1": c1, "C2": c2, "delta": delta, "tail_certified": True},
    )
    return _finish(report, 0.5 * math.sqrt(d))


# ---------------------------------------------------------------------------
# sphere bounds
# ---------------------------------------------------------------------------

def _sphere_arrays(energies: SphereEnergySeq):
    lmax = energies.max_ell
    ell = np.arange(1, lmax + 1, dtype=np.float64)
    lam = ell * (ell + energies.dim - 1.0)
    mult = np.array([float(sphere_mult(energies.dim, int(l))) for l in range(1, lmax + 1)])
    return ell, lam, mult


def bound_sphere_heat(energies: SphereEnergySeq, params: BoundParams,
                      t: float) -> BoundReport:
    """Heat-kernel bound on the sphere in basis-free energy form."""
    p, d = params.p, energies.dim
    params.require_c()
    if t <= 0:
        raise InvalidHypothesis("requires t > 0")
    q0 = params.q0
    _check_heat_rule(energies.rule, t, q0)
    ell, lam, mult = _sphere_arrays(energies)
    ratio = np.divide(energies.energies, mult * lam)
    retained = float((mult * np.exp(-lam * q0 * t)) @ ratio ** (0.5 * q0))
    delta = heat_delta(d, t, params.r, params.b, params.c)
    if p == 1.0:
        c2 = 1.0
    elif p <= 2.0:
        c2 = c2_factor(p, params.c, delta)
    else:
        c2 = 2.0 * (p - 1.0) * c2_factor(p, params.c, delta)
    c1 = _c1_sqrt2d(d, p, params.c) if p <= 2.0 else _c1_gt2(d, p, params.c)
    fourier, tail_c = _root_terms(retained, energies.tail_bound, q0, c2)
    c1_term = c1 * math.sqrt(t)
    report = BoundReport(
        "sphere_heat", c1_term + fourier + tail_c, t, c1_term, fourier, tail_c,
        {"C1": c1, "C2": c2, "delta": delta, "q0": q0, "tail_certified": True},
    )
    return _finish(report, math.pi)


def bound_sphere_projection(energies: SphereEnergySeq, params: BoundParams,
                            L: int) -> BoundReport:
    """Projection-kernel bound: C1/L plus a finite degree sum (no tail)."""
    p, d = params.p, energies.dim
    params.require_c()
    if L != int(L) or L < 1:
        raise InvalidHypothesis("requires integer L ≥ 1")
    L = int(L)
    if energies.max_ell < L:
        raise InsufficientWindow(f"requires energies through degree {L}")
    q0 = params.q0
    ell, lam, mult = _sphere_arrays(energies)
    sel = ell <= L
    ratio = np.divide(energies.energies[sel], mult[sel] * lam[sel])
    retained = float(mult[sel] @ ratio ** (0.5 * q0))
    x = _one_minus_c_root(params.c, p)
    c1 = (8.0 * (1.0 + x) * 12.0 ** (1.0 / p) * d * math.exp(d / p)
          * (0.5 * (p + 5.0)) ** (1.0 + d / p))
    if p == 1.0:
        c2 = 1.0
    elif p <= 2.0:
        c2 = p * params.c ** (-1.0 / params.q)
    else:
        c2 = 2.0 * (p - 1.0) * p * params.c ** (-1.0 / params.q)
    fourier, tail_c = _root_terms(retained, 0.0, q0, c2)
    c1_term = c1 / L
    report = BoundReport(
        "sphere_projection", c1_term + fourier + tail_c, float(L), c1_term,
        fourier, tail_c, {"C1": c1, "C2": c2, "q0": q0, "tail_certified": True},
    )
    return _finish(report, math.pi)


def sphere_winf_delta(d: int, T: float, b: float, c: float) -> float:
    """min(b 9^d / (114 d! 2^{d^2/4 + d/4} T^d), c), evaluated in log space."""
    logv = (math.log(b) + d * math.log(9.0) - math.log(114.0)
            - math.lgamma(d + 1.0)
            - (d * d / 4.0 + d / 4.0) * math.log(2.0) - d * math.log(T))
    return min(math.exp(min(logv, 700.0)), c)


def bound_sphere_winf(energies: SphereEnergySeq, c: float, b: float, r: float,
                      d: int, T: float) -> BoundReport:
    """Supremum-norm bound on spheres of dimension at least three."""
    name = "sphere_winf"
    if d != energies.dim:
        raise InvalidHypothesis("requires the table dimension to match d")
    if d < 3:
        raise InvalidHypothesis("requires d ≥ 3")
    if c <= 0:
        return _invalid(name, T, "requires c > 0")
    if b <= 0:
        return _invalid(name, T, "requires b > 0")
    if not 0.0 < r <= 2.0 ** (-d - 3) / math.sqrt(d):
        return _invalid(name, T, "requires 0 < r ≤ 2^{-d-3} d^{-1/2}")
    if T < 2.0 ** (d + 3) / math.sqrt(d) * r:
        return _invalid(name, T, "requires T ≥ 2^{d+3} d^{-1/2} r")
    if T > 1.0 / d:
        return _invalid(name, T, "requires T ≤ 1/d")
    if not isinstance(energies.rule, WinfRule):
        raise TailCertificateMissing("table was not built with a supremum-norm rule")
    if energies.rule.T > T * (1.0 + 1e-12):
        raise TailCertificateMissing(
            f"table certificate starts at T = {energies.rule.T:g} > requested {T:g}"
        )
    ell, lam, mult = _sphere_arrays(energies)
    aw = np.array([_tails.winf_weight_sphere(d, T, float(l)) for l in ell])
    retained = float(aw @ np.sqrt(mult * energies.energies / lam))
    delta = sphere_winf_delta(d, T, b, c)
    c1 = 1.0 + (0.0 if energies.mu_is_vol else 1.0)
    c2 = winf_c2_factor(c, delta)
    fourier = c2 * retained
    tail_c = c2 * energies.tail_bound
    c1_term = c1 * T
    report = BoundReport(
        name, c1_term + fourier + tail_c, T, c1_term, fourier, tail_c,
        {"C1": c1, "C2": c2, "delta": delta, "tail_certified": True},
    )
    return _finish(report, math.pi)


# ---------------------------------------------------------------------------
# generic manifold bounds
# ---------------------------------------------------------------------------

def _manifold_c3_le2(d: int, a: float, diam: float) -> float:
    if a == 0.0:
        return 0.0
    return (2.0 ** 1.5 * (d - 1.0) * math.sqrt(a) / (3.0 * d)
            * math.sqrt(d + (d - 1.0) * math.sqrt(a) * diam))


def bound_manifold_heat_p_le2(diff: GenericSpectrumDiff, params: BoundParams,
                              mconst: ManifoldConstants, t: float) -> BoundReport:
    """Heat bound for 1 <= p <= 2 from raw spectral data."""
    p, d = params.p, params.d
    if p > 2.0:
        raise InvalidHypothesis("requires p ≤ 2")
    params.require_c()
    if t <= 0:
        raise InvalidHypothesis("requires t > 0")
    tail, certified = 0.0, False
    if diff.torus_window is not None:
        tdim, _, rule = diff.torus_window
        if tdim != d:
            raise InvalidHypothesis("requires the spectrum dimension to match d")
        _check_heat_rule(rule, t, 2.0)
        tail, certified = diff.tail_bound, True
    lam = diff.eigenvalues
    retained = float(np.exp(-2.0 * lam * t) @ (diff.diffs ** 2 / lam))
    delta = 0.0
    if params.c > 0:
        delta = heat_lower_delta(mconst.ricci_a, d, t, params.r, params.b, params.c)
    c1 = _c1_sqrt2d(d, p, params.c)
    c3 = _manifold_c3_le2(d, mconst.ricci_a, mconst.diam)
    c2 = 1.0 if p == 1.0 else c2_factor(p, params.c, delta)
    fourier, tail_c = _root_terms(retained, tail, 2.0, c2)
    c1_term = c1 * math.sqrt(t) * math.sqrt(1.0 + c3 * math.sqrt(t))
    report = BoundReport(
        "manifold_heat_p_le2", c1_term + fourier + tail_c, t, c1_term, fourier,
        tail_c, {"C1": c1, "C2": c2, "C3": c3, "delta": delta, "q0": 2.0,
                 "tail_certified": certified},
    )
    diam = mconst.diam if mconst.diam > 0 else math.inf
    return _finish(report, diam)


def bound_manifold_heat_p_gt2(diff: GenericSpectrumDiff, params: BoundParams,
                              mconst: ManifoldConstants, t: float) -> BoundReport:
    """Heat bound for p > 2: Weyl-shell grouping with conjugate exponent."""
    p, d = params.p, params.d
    if p <= 2.0:
        raise InvalidHypothesis("requires p > 2")
    if params.c <= 0:
        raise InvalidHypothesis("requires c > 0")
    if t <= 0:
        raise InvalidHypothesis("requires t > 0")
    if mconst.k_weyl <= 0:
        raise MissingConstants("requires K_Weyl > 0 for p > 2")
    a = mconst.ricci_a
    if a > 0 and mconst.k_poincare <= 0:
        raise MissingConstants("requires K_Poincare > 0 when A > 0")
    q = params.q
    weyl_exp = (p - 2.0) * (d - 1.0) / (2.0 * p - 2.0)
    lam = diff.eigenvalues
    inner_vals = np.exp(-2.0 * lam * t) * diff.diffs ** 2 / (lam + (d - 1.0) * a)
    shells = np.floor(np.sqrt(lam)).astype(np.int64)
    retained = 0.0
    for ell in np.unique(shells):
        s = float(inner_vals[shells == ell].sum())
        retained += (ell + 1.0) ** weyl_exp * s ** (0.5 * q)
    tail, certified = 0.0, False
    if diff.torus_window is not None:
        tdim, window, rule = diff.torus_window
        if tdim != d:
            raise InvalidHypothesis("requires the spectrum dimension to match d")
        _check_heat_rule(rule, t, 2.0)
        tail = _tails.manifold_gt2_tail_torus(d, window, t, q, weyl_exp, a)
        certified = True
    delta = heat_lower_delta(a, d, t, params.r, params.b, params.c)
    riesz = (2.0 if a == 0.0 else 3.0 * math.sqrt(6.0)) * (p - 1.0)
    c2 = (mconst.k_weyl ** ((p - 2.0) / (2.0 * p))
          * (riesz + math.sqrt(d - 1.0) * math.sqrt(a) * mconst.k_poincare)
          * c2_factor(p, params.c, delta))
    c1 = _c1_gt2(d, p, params.c)
    c3 = 0.0
    if a > 0:
        c3 = 2.0 * (d - 1.0) * math.sqrt(a) * math.exp(
            0.5 * (p + 2.0) + 0.5 * (d - 1.0) * math.sqrt(a) * mconst.diam
        )
    fourier = c2 * retained ** (1.0 / q)
    total = c2 * (retained + tail) ** (1.0 / q)
    tail_c = max(total - fourier, 0.0)
    c1_term = c1 * math.sqrt(t) * (1.0 + c3 * math.sqrt(t)) ** (1.0 / p)
    report = BoundReport(
        "manifold_heat_p_gt2", c1_term + fourier + tail_c, t, c1_term, fourier,
        tail_c, {"C1": c1, "C2": c2, "C3": c3, "delta": delta, "q": q,
                 "weyl_exponent": weyl_exp, "tail_certified": certified},
    )
    diam = mconst.diam if mconst.diam > 0 else math.inf
    return _finish(report, diam)


# ---------------------------------------------------------------------------
# free-parameter optimization
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_bound(evaluator: Callable[[float], BoundReport],
                   param_range: Sequence[float], grid: int = 64,
                   integer: Optional[bool] = None):
    """Deterministic grid search plus golden-section refinement.

    Continuous parameters use a log-spaced grid followed by two
    golden-section refinement sweeps on the bracket around the best grid
    point; integer parameters are scanned exhaustively (log-thinned above
    10^4 candidates).  Returns (best_param, best_report); candidates that
    violate hypotheses are skipped.
    """
    lo, hi = param_range
    if not lo <= hi:
        raise DomainError("requires a nonempty parameter range")
    if integer is None:
        integer = isinstance(lo, (int, np.integer)) and isinstance(hi, (int, np.integer))

    last_reason = ["outside hypothesis ranges"]

    def probe(x: float):
        try:
            rep = evaluator(x)
        except InvalidHypothesis as exc:
            last_reason[0] = str(exc)
            return None
        if not rep.valid:
            last_reason[0] = rep.reason
            return None
        return rep

    evaluated: dict = {}

    def eval_at(x: float):
        if x not in evaluated:
            evaluated[x] = probe(x)
        return evaluated[x]

    if integer:
        lo_i, hi_i = int(math.ceil(lo)), int(math.floor(hi))
        count = hi_i - lo_i + 1
        if count <= 10_000:
            candidates = range(lo_i, hi_i + 1)
        else:
            candidates = sorted(set(
                int(round(x)) for x in np.geomspace(max(lo_i, 1), hi_i, 10_000)
            ))
        best = None
        for h in candidates:
            rep = eval_at(h)
            if rep is not None and (best is None or (rep.value, h) < (best[1].value, best[0])):
                best = (h, rep)
        if best is None:
            raise NoValidPoint(
                f"no parameter in range satisfies the hypotheses ({last_reason[0]})"
            )
        return best

    if lo <= 0:
        raise DomainError("continuous parameters must be positive")
    xs = np.geomspace(lo, hi, grid) if hi > lo else np.array([lo])
    best = None
    best_idx = 0
    for i, x in enumerate(xs):
        rep = eval_at(float(x))
        if rep is not None and (best is None or (rep.value, x) < (best[1].value, best[0])):
            best = (float(x), rep)
            best_idx = i
    if best is None:
        raise NoValidPoint(
            f"no parameter in range satisfies the hypotheses ({last_reason[0]})"
        )
    # two golden-section sweeps on the log-scale bracket around the best point
    left = math.log(xs[max(best_idx - 1, 0)])
    right = math.log(xs[min(best_idx + 1, len(xs) - 1)])
    for _ in range(2):
        a, bnd = left, right
        for _ in range(24):
            m1 = bnd - _GOLDEN * (bnd - a)
            m2 = a + _GOLDEN * (bnd - a)
            r1, r2 = eval_at(math.exp(m1)), eval_at(math.exp(m2))
            v1 = r1.value if r1 is not None else math.inf
            v2 = r2.value if r2 is not None else math.inf
            if v1 <= v2:
                bnd = m2
            else:
                a = m1
        left, right = a, bnd
    for x, rep in evaluated.items():
        if rep is not None and (rep.value, x) < (best[1].value, best[0]):
            best = (x, rep)
    return best
