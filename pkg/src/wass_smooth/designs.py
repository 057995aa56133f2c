"""Spherical design verification and the design-distance corollary.

A point set is a t-design exactly when its uniform empirical measure has
vanishing harmonic energy through degree t; the residuals checked here are
those energies, which also feed the projection bound with a zero series
term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import design_bound
from .errors import DomainError, NotADesign
from .measures import DiscreteMeasure, UniformVol, _energy_array
from .oracle import OtResult, wp_vs_vol_enclosure

DEFAULT_DESIGN_TOL = 1e-10


@dataclass
class DesignReport:
    """Residuals and verdict for one claimed design strength."""

    t: int
    residuals: list  # (degree, energy) pairs for 1 <= degree <= t
    is_design: bool
    tol: float
    corollary_bound: Optional[float] = None
    oracle_enclosure: Optional[OtResult] = None
    p: Optional[float] = None

    @property
    def max_residual(self) -> float:
        return max((e for _, e in self.residuals), default=0.0)

    def to_json(self) -> dict:
        out = {
            "t": self.t,
            "residuals": [[int(l), float(e)] for l, e in self.residuals],
            "max_residual": self.max_residual,
            "is_design": self.is_design,
            "tol": self.tol,
        }
        if self.corollary_bound is not None:
            out["corollary_bound"] = self.corollary_bound
            out["p"] = self.p
        if self.oracle_enclosure is not None:
            out["oracle"] = self.oracle_enclosure.to_json()
        return out


def design_check(points: DiscreteMeasure, t: int,
                 tol: float = DEFAULT_DESIGN_TOL) -> DesignReport:
    """Harmonic-energy residuals of the point set against Vol through degree t."""
    if points.space != "sphere":
        raise DomainError("designs live on spheres")
    if t < 1:
        raise DomainError("strength t must be >= 1")
    w = points.weights
    if np.max(np.abs(w - 1.0 / len(w))) > 1e-12:
        raise DomainError("designs are defined for uniform weights")
    vol = UniformVol("sphere", points.dim)
    energies = _energy_array(points, vol, t)[1:]
    residuals = [(ell, float(energies[ell - 1])) for ell in range(1, t + 1)]
    return DesignReport(t, residuals, bool(max(e for _, e in residuals) <= tol), tol)


_PHI = (1.0 + math.sqrt(5.0)) / 2.0

_KNOWN: dict = {
    # name -> (vertex generator, design strength)
    "tetrahedron": (
        lambda: np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0],
                          [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]) / math.sqrt(3.0),
        2,
    ),
    "octahedron": (
        lambda: np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
                          [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
                          [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]),
        3,
    ),
    "cube": (
        lambda: np.array([[sx, sy, sz] for sx in (1.0, -1.0)
                          for sy in (1.0, -1.0) for sz in (1.0, -1.0)]) / math.sqrt(3.0),
        3,
    ),
    "icosahedron": (
        lambda: np.array([[0.0, s1, s2 * _PHI] for s1 in (1.0, -1.0) for s2 in (1.0, -1.0)]
                         + [[s1, s2 * _PHI, 0.0] for s1 in (1.0, -1.0) for s2 in (1.0, -1.0)]
                         + [[s2 * _PHI, 0.0, s1] for s1 in (1.0, -1.0) for s2 in (1.0, -1.0)])
        / math.sqrt(1.0 + _PHI * _PHI),
        5,
    ),
}


def known_design(name: str) -> DiscreteMeasure:
    """Exact-coordinate vertex fixtures on the 2-sphere."""
    try:
        gen, _ = _KNOWN[name]
    except KeyError:
        raise DomainError(f"unknown design fixture {name!r} "
                          f"(have {sorted(_KNOWN)})")
    return DiscreteMeasure.on_sphere(gen())


def known_design_strength(name: str) -> int:
    if name not in _KNOWN:
        raise DomainError(f"unknown design fixture {name!r}")
    return _KNOWN[name][1]


def corollary_verify(points: DiscreteMeasure, t: int, p: float, m: int,
                     check_tol: float = 1e-8) -> DesignReport:
    """Check the design property, then compare the corollary bound C/t with an
    oracle enclosure of the actual distance to Vol.

    Raises NotADesign if the residual test fails; otherwise asserts that the
    enclosure's lower end sits below the bound (it must, for a sound bound).
    """
    report = design_check(points, t, tol=check_tol)
    if not report.is_design:
        raise NotADesign(
            f"max residual {report.max_residual:g} exceeds {check_tol:g} at strength {t}"
        )
    bound = design_bound(points.dim, p, t)
    enclosure = wp_vs_vol_enclosure(points, p, m)
    report.corollary_bound = bound
    report.oracle_enclosure = enclosure
    report.p = p
    if enclosure.lower > bound:
        raise NotADesign(
            f"oracle lower end {enclosure.lower:g} exceeds the corollary bound {bound:g}"
        )
    return report
