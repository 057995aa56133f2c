"""Randomized soundness experiments: optimized bounds vs exact oracles.

Each instance draws one or two random discrete measures with uniform
weights.  At p = 1 the bounds apply with no density assumption, so two
empirical measures are compared against the exact transportation oracle.
At p > 1 every bound requires the first measure to dominate c Vol, which a
discrete measure cannot, so those rows compare bounds for (Vol, empirical)
with c = 1 against an oracle enclosure of the distance to Vol.

Instances are generated from a per-instance seeded generator, so a fixed
(seed, n, space, p list) reproduces byte-identical tables regardless of
thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import (BoundParams, bound_sphere_heat, bound_sphere_projection,
                     bound_torus_heat, bound_torus_jackson, optimize_bound)
from .measures import (DiscreteMeasure, HeatRule, JacksonWindow,
                       ProjectionWindow, UniformVol, sphere_energy_seq,
                       torus_diff_table)
from .oracle import discrete_wp, wp_vs_vol_enclosure

SPACES = ("torus1", "torus2", "sphere2")

# per-space experiment scales: smoothing ranges and enclosure resolution
_HEAT_RANGE = (1e-3, 1.0)
_JACKSON_MAX_H = 24
_PROJECTION_MAX_L = 40
_ENCLOSURE_M = {"torus1": 2000, "torus2": 48, "sphere2": 1500}


@dataclass(frozen=True)
class SuiteRow:
    instance: int
    space: str
    p: float
    method: str
    bound: float
    oracle: float
    oracle_lower: float
    ratio: float
    violated: bool

    def csv(self) -> str:
        return ",".join([
            str(self.instance), self.space, f"{self.p:g}", self.method,
            repr(self.bound), repr(self.oracle), repr(self.oracle_lower),
            repr(self.ratio), "1" if self.violated else "0",
        ])


CSV_HEADER = "instance,space,p,method,bound,oracle,oracle_lower,ratio,violated"


def _space_dim(space: str):
    if space == "torus1":
        return "torus", 1
    if space == "torus2":
        return "torus", 2
    if space == "sphere2":
        return "sphere", 2
    raise ValueError(f"unknown space {space!r} (have {SPACES})")


def random_measure(space: str, rng: np.random.Generator,
                   max_atoms: int = 12) -> DiscreteMeasure:
    """Uniform-weight random instance: uniform atoms on the torus, normalized
    Gaussian directions on the sphere; 2 to max_atoms atoms."""
    kind, d = _space_dim(space)
    n = int(rng.integers(2, max_atoms + 1))
    if kind == "torus":
        return DiscreteMeasure.on_torus(rng.random((n, d)))
    pts = rng.normal(size=(n, d + 1))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return DiscreteMeasure.on_sphere(pts)


def _torus_bounds(mu, nu, params: BoundParams, grid: int) -> dict:
    d = params.d
    t_lo, t_hi = _HEAT_RANGE
    heat_tab = torus_diff_table(mu, nu, 4.0, HeatRule(t=t_lo, q0=params.q0))
    jackson_tab = torus_diff_table(mu, nu, _JACKSON_MAX_H * math.sqrt(d) + 1e-9,
                                   JacksonWindow())
    out = {}
    _, rep = optimize_bound(lambda t: bound_torus_heat(heat_tab, params, t),
                            (t_lo, t_hi), grid=grid)
    out["heat"] = rep
    _, rep = optimize_bound(lambda h: bound_torus_jackson(jackson_tab, params, int(h)),
                            (2, _JACKSON_MAX_H), integer=True)
    out["jackson"] = rep
    return out


def _sphere_bounds(mu, nu, params: BoundParams, grid: int) -> dict:
    t_lo, t_hi = _HEAT_RANGE
    heat_seq = sphere_energy_seq(mu, nu, 8, HeatRule(t=t_lo, q0=params.q0))
    proj_seq = sphere_energy_seq(mu, nu, _PROJECTION_MAX_L, ProjectionWindow())
    out = {}
    _, rep = optimize_bound(lambda t: bound_sphere_heat(heat_seq, params, t),
                            (t_lo, t_hi), grid=grid)
    out["heat"] = rep
    _, rep = optimize_bound(lambda L: bound_sphere_projection(proj_seq, params, int(L)),
                            (1, _PROJECTION_MAX_L), integer=True)
    out["projection"] = rep
    return out


def run_instance(space: str, seed: int, instance: int,
                 p_values: Sequence[float], grid: int = 48) -> list:
    """All rows of one instance: p = 1 on an empirical pair, p > 1 vs Vol."""
    kind, d = _space_dim(space)
    rng = np.random.default_rng([seed, instance])
    nu1 = random_measure(space, rng)
    nu2 = random_measure(space, rng)
    vol = UniformVol(kind, d)
    rows = []
    for p in p_values:
        if p == 1.0:
            mu, nu, c = nu2, nu1, 0.0
            oracle = discrete_wp(mu, nu, 1.0)
        else:
            mu, nu, c = vol, nu1, 1.0
            oracle = wp_vs_vol_enclosure(nu1, p, _ENCLOSURE_M[space])
        params = BoundParams(p=p, c=c, d=d)
        if kind == "torus":
            reports = _torus_bounds(mu, nu, params, grid)
        else:
            reports = _sphere_bounds(mu, nu, params, grid)
        for method, rep in sorted(reports.items()):
            lower = oracle.lower
            ratio = rep.value / oracle.value if oracle.value > 0 else math.inf
            rows.append(SuiteRow(
                instance=instance, space=space, p=p, method=method,
                bound=rep.value, oracle=oracle.value, oracle_lower=lower,
                ratio=ratio, violated=bool(rep.value < lower),
            ))
    return rows


def default_threads() -> int:
    env = os.environ.get("WASS_SMOOTH_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def run_suite(space: str, n: int, seed: int, p_values: Sequence[float],
              threads: int = 0, grid: int = 48):
    """Run n instances; returns (rows in instance order, violation count)."""
    threads = threads or default_threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(
                lambda i: run_instance(space, seed, i, p_values, grid), range(n)
            ))
    else:
        chunks = [run_instance(space, seed, i, p_values, grid) for i in range(n)]
    rows = [row for chunk in chunks for row in chunk]
    return rows, sum(1 for r in rows if r.violated)
