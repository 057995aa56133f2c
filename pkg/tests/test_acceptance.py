"""Acceptance criteria, one test per criterion.

Each test prints a PASS line with its headline numbers (visible with
pytest -s).  Criterion 1 is the heavy one: 100 seeded instances on each of
the circle, the 2-torus and the 2-sphere, at p in {1, 2, 4}, every
applicable optimized bound checked against the exact oracle (empirical
pairs) or the enclosure lower end (distance to the volume measure).
"""

import math

import numpy as np
import pytest

from _harmonics import energy_via_basis
from wass_smooth import _tails
from wass_smooth.bounds import (BoundParams, ManifoldConstants,
                                bound_manifold_heat_p_le2, bound_sphere_heat,
                                bound_torus_heat, bound_torus_winf, c1_heat_torus,
                                c2_factor, design_bound, optimize_bound,
                                torus_winf_delta)
from wass_smooth.designs import design_check, known_design
from wass_smooth.measures import (DiscreteMeasure, HeatRule, UniformVol,
                                  WinfRule, generic_diff_from_torus,
                                  sphere_energy, sphere_energy_seq,
                                  torus_diff_table)
from wass_smooth.oracle import (circle_w1, discrete_wp, quantize_vol,
                                wp_vs_vol_enclosure)
from wass_smooth.soundness import SPACES, random_measure, run_suite
from wass_smooth.spectral import sphere_eigen

SEED = 20_260_809


def test_criterion_1_soundness_suite():
    """Optimized bounds dominate oracles on 100 instances per space, p in {1,2,4}."""
    total_rows = 0
    worst_ratio = math.inf
    for space in SPACES:
        rows, violations = run_suite(space, 100, SEED, [1.0, 2.0, 4.0], threads=4)
        assert violations == 0, f"soundness violations on {space}"
        total_rows += len(rows)
        worst_ratio = min(worst_ratio, min(r.ratio for r in rows))
    assert total_rows == 3 * 100 * 3 * 2
    print(f"\nACCEPTANCE 1 PASS: {total_rows} bound/oracle comparisons, "
          f"0 violations (tightest bound/oracle ratio {worst_ratio:.3f})")


def test_criterion_2_design_corollary():
    """Octahedron and icosahedron reproduce the design corollary numerically."""
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    results = []
    for name, t in (("octahedron", 3), ("icosahedron", 5)):
        points = known_design(name)
        check = design_check(points, t)
        assert check.is_design and check.max_residual < 1e-10
        bound = design_bound(2, 1.0, t)
        # independent high-precision arithmetic of 14 d max(d log(100 d), p)/t
        ref = 14 * 2 * mp.mpf(2) * mp.log(200) / t
        assert bound == pytest.approx(float(ref), rel=1e-6)
        enclosure = wp_vs_vol_enclosure(points, 1.0, 2000)
        assert enclosure.lower < bound
        results.append((name, check.max_residual, bound, enclosure.value))
    print("\nACCEPTANCE 2 PASS: " + "; ".join(
        f"{n}: residual {r:.2e}, bound {b:.4f}, oracle ~{o:.4f}"
        for n, r, b, o in results))


def test_criterion_3_constant_formulas():
    """Heat constant obeys the closed cap; the limit form of the density
    factor is continuous."""
    rng = np.random.default_rng(SEED)
    for _ in range(1000):
        d = int(rng.integers(1, 5))
        p = float(rng.uniform(1.0, 10.0))
        c = float(rng.uniform(1e-9, 1.0))
        cap = (1.0 + (1.0 - c) ** (1.0 / p)) * math.sqrt(2.0 * d + p)
        assert c1_heat_torus(d, p, c) <= cap * (1.0 + 1e-12)
    worst = 0.0
    for p in (1.5, 2.0, 3.0, 10.0):
        for c in (0.1, 1.0):
            lim = c ** (1.0 / p - 1.0)
            val = c2_factor(p, c, c * (1.0 - 1e-10))
            worst = max(worst, abs(val - lim) / lim)
    assert worst < 1e-7
    print(f"\nACCEPTANCE 3 PASS: 1000 constant caps hold; "
          f"limit-form continuity within {worst:.2e}")


def test_criterion_4_cross_consistency():
    """Flat-curvature manifold evaluator reproduces the torus heat bound."""
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(1, 3))
        space = "torus1" if d == 1 else "torus2"
        nu = random_measure(space, rng, max_atoms=8)
        vol = UniformVol("torus", d)
        t = float(rng.uniform(2e-3, 0.3))
        b = float(rng.uniform(0.0, 0.5))
        r = float(rng.uniform(0.01, 0.2))
        rule = HeatRule(t=t, q0=2.0)
        tab = torus_diff_table(vol, nu, 3.0, rule)
        gen = generic_diff_from_torus(vol, nu, 3.0, rule)
        params = BoundParams(p=2.0, c=1.0, b=b, r=r, d=d)
        v1 = bound_torus_heat(tab, params, t).value
        v2 = bound_manifold_heat_p_le2(
            gen, params, ManifoldConstants(ricci_a=0.0, diam=0.5 * math.sqrt(d)),
            t).value
        worst = max(worst, abs(v1 - v2) / v1)
    assert worst <= 1e-12
    print(f"\nACCEPTANCE 4 PASS: 50 instances, worst relative gap {worst:.2e}")


def test_criterion_5_oracle_integrity():
    """Circle closed form vs LP; dual certificates; monotonicity in p."""
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(50):
        n1, n2 = rng.integers(2, 9, size=2)
        mu = DiscreteMeasure.on_torus(rng.random((n1, 1)))
        nu = DiscreteMeasure.on_torus(rng.random((n2, 1)))
        a = circle_w1(mu, nu).value
        b = discrete_wp(mu, nu, 1.0).value  # certificate checked internally
        worst = max(worst, abs(a - b))
    assert worst <= 1e-9
    mono_fail = 0
    for _ in range(200):
        n1, n2 = rng.integers(2, 7, size=2)
        mu = DiscreteMeasure.on_torus(rng.random((n1, 1)))
        nu = DiscreteMeasure.on_torus(rng.random((n2, 1)))
        vals = [discrete_wp(mu, nu, p).value for p in (1.0, 1.5, 2.0, 4.0)]
        if any(lo > hi + 1e-10 for lo, hi in zip(vals, vals[1:])):
            mono_fail += 1
    assert mono_fail == 0
    print(f"\nACCEPTANCE 5 PASS: circle vs LP within {worst:.2e}; "
          f"250 LP certificates verified; monotone in p on 200 instances")


def test_criterion_6_spectral_correctness():
    """Zonal double sums match an explicit harmonic basis; point-mass
    energies equal the eigenspace dimensions."""
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(50):
        mu = random_measure("sphere2", rng, max_atoms=8)
        nu = random_measure("sphere2", rng, max_atoms=8)
        for ell in range(1, 5):
            ours = sphere_energy(mu, nu, ell)
            ref = energy_via_basis(mu, nu, ell)
            worst = max(worst, abs(ours - ref) / max(ref, 1e-12))
    assert worst <= 1e-9
    for d in (2, 3, 4):
        north = np.zeros(d + 1)
        north[-1] = 1.0
        point = DiscreteMeasure.on_sphere([north])
        vol = UniformVol("sphere", d)
        for ell in range(1, 11):
            mult = sphere_eigen(d, ell).mult
            got = sphere_energy(point, vol, ell)
            assert abs(got - mult) <= 1e-9 * mult
    print(f"\nACCEPTANCE 6 PASS: basis-free energies match explicit basis "
          f"within {worst:.2e}; point-mass energies exact for d in 2..4")


def test_criterion_7_winf_lattice_bounds():
    """Supremum bound dominates the exact covering radius of square lattices;
    closed-form weights and floors reproduce hand values to 6 digits."""
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    # hand-computed weight and floor values
    assert _tails.winf_weight_torus(1, 0.5, 2.0) == 1.0
    ref = float(mp.e ** (-(2 / (4 * mp.log(2))) * mp.log(1.5 * mp.pi / 4)
                         * mp.log(mp.e ** 2 * 1.5 * mp.pi / 3)))
    assert _tails.winf_weight_torus(1, 0.5, 3.0) == pytest.approx(ref, rel=1e-6)
    ref = float(mp.gamma(mp.mpf(3) / 2) * 4 / (27 * mp.sqrt(mp.pi) / 2))
    assert torus_winf_delta(1, 0.5, 1.0, 10.0) == pytest.approx(ref, rel=1e-6)
    ref = float(43 * mp.e ** (-mp.log(mp.mpf("2.5")) * mp.log(mp.mpf("1.25"))
                              / mp.log(2)))
    assert _tails.winf_weight_sphere(3, 0.1, 400) == pytest.approx(ref, rel=1e-6)
    ref = float(mp.mpf(9) ** 3 / (114 * 6 * 2 ** mp.mpf(3) * mp.mpf("0.1") ** 3))
    from wass_smooth.bounds import sphere_winf_delta
    assert sphere_winf_delta(3, 0.1, 1.0, 1e9) == pytest.approx(ref, rel=1e-6)

    vol = UniformVol("torus", 2)
    lines = []
    for m, rtol, cap in ((4, 1e-12, 1_500_000), (8, 1e-12, 2_500_000),
                         (16, 1e-9, 4_500_000)):
        lattice, err = quantize_vol("torus", 2, m)
        exact_winf = math.sqrt(2.0) / (2.0 * m)
        assert err == pytest.approx(exact_winf)
        r = exact_winf
        t_lo = 5.0 * r
        rule = WinfRule(T=t_lo, rtol=rtol)
        tab = torus_diff_table(vol, lattice, 80.0, rule, max_points=cap)
        _, rep = optimize_bound(
            lambda T: bound_torus_winf(tab, 1.0, 1.0 / m ** 2, r, 2, T),
            (t_lo, 10.0 * r), grid=24)
        assert rep.valid and rep.value >= exact_winf
        lines.append(f"m={m}: exact {exact_winf:.5f} <= bound {rep.value:.5f}")
    print("\nACCEPTANCE 7 PASS: " + "; ".join(lines))


def test_criterion_8_tail_certificates():
    """Doubling any truncation window moves reported bounds by < 1e-10."""
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for space in ("torus1", "torus2"):
        d = 1 if space == "torus1" else 2
        vol = UniformVol("torus", d)
        for _ in range(5):
            nu = random_measure(space, rng, max_atoms=8)
            for p in (2.0, 4.0):
                params = BoundParams(p=p, c=1.0, d=d)
                rule = HeatRule(t=1e-3, q0=params.q0)
                tab1 = torus_diff_table(vol, nu, 4.0, rule)
                tab2 = torus_diff_table(vol, nu, 2.0 * tab1.window, rule)
                t_best, rep1 = optimize_bound(
                    lambda t: bound_torus_heat(tab1, params, t), (1e-3, 1.0),
                    grid=24)
                rep2 = bound_torus_heat(tab2, params, t_best)
                worst = max(worst, abs(rep1.value - rep2.value) / rep1.value)
    vol2 = UniformVol("sphere", 2)
    for _ in range(5):
        nu = random_measure("sphere2", rng, max_atoms=8)
        for p in (2.0, 4.0):
            params = BoundParams(p=p, c=1.0, d=2)
            rule = HeatRule(t=1e-3, q0=params.q0)
            seq1 = sphere_energy_seq(vol2, nu, 8, rule)
            seq2 = sphere_energy_seq(vol2, nu, 2 * seq1.max_ell, rule)
            t_best, rep1 = optimize_bound(
                lambda t: bound_sphere_heat(seq1, params, t), (1e-3, 1.0),
                grid=24)
            rep2 = bound_sphere_heat(seq2, params, t_best)
            worst = max(worst, abs(rep1.value - rep2.value) / rep1.value)
    # supremum-norm series on the coarse lattice instance
    lattice, _ = quantize_vol("torus", 2, 4)
    r = math.sqrt(2.0) / 8.0
    rule = WinfRule(T=5 * r)
    tab1 = torus_diff_table(UniformVol("torus", 2), lattice, 60.0, rule,
                            max_points=2_000_000)
    tab2 = torus_diff_table(UniformVol("torus", 2), lattice, 2.0 * tab1.window,
                            rule, max_points=8_000_000)
    v1 = bound_torus_winf(tab1, 1.0, 1 / 16.0, r, 2, 5 * r).value
    v2 = bound_torus_winf(tab2, 1.0, 1 / 16.0, r, 2, 5 * r).value
    worst = max(worst, abs(v1 - v2) / v1)
    assert worst <= 1e-10
    print(f"\nACCEPTANCE 8 PASS: doubling windows moves bounds by at most "
          f"{worst:.2e} relative")
