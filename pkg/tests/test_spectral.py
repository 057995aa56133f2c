import math

import numpy as np
import pytest
from scipy.special import roots_jacobi
from scipy.special import eval_gegenbauer, eval_jacobi

from wass_smooth.errors import DomainError, ResourceLimit
from wass_smooth.spectral import (gegenbauer_eval, jacobi_eval, lattice_shells,
                                  log_gamma_ratio, sphere_eigen, zonal_eval)


# -- Gegenbauer --------------------------------------------------------------

def test_gegenbauer_known_values():
    # max-value identity at t = 1: binom(l + 2 lam - 1, l)
    assert gegenbauer_eval(0.5, 2, 1.0) == pytest.approx(1.0, abs=1e-14)
    # base case C_1 = 2 lam t
    assert gegenbauer_eval(1.5, 1, 0.5) == pytest.approx(1.5, abs=1e-15)
    # Legendre P_2(0) = (3 t^2 - 1)/2 at t = 0
    assert gegenbauer_eval(0.5, 2, 0.0) == pytest.approx(-0.5, abs=1e-15)


def test_gegenbauer_matches_reference_impl():
    rng = np.random.default_rng(101)
    for _ in range(200):
        lam = float(rng.uniform(0.5, 3.0))
        ell = int(rng.integers(0, 6))
        t = float(rng.uniform(-1.0, 1.0))
        ours = gegenbauer_eval(lam, ell, t)
        ref = float(eval_gegenbauer(ell, lam, t))
        assert ours == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_gegenbauer_explicit_polynomials():
    # hand expansions, independent of any library recurrence
    rng = np.random.default_rng(7)
    for lam in (0.5, 1.0, 2.5):
        for t in rng.uniform(-1, 1, 40):
            c2 = 2 * lam * (1 + lam) * t * t - lam
            c3 = 4 / 3 * lam * (1 + lam) * (2 + lam) * t ** 3 - 2 * lam * (1 + lam) * t
            assert gegenbauer_eval(lam, 2, t) == pytest.approx(c2, rel=1e-12, abs=1e-12)
            assert gegenbauer_eval(lam, 3, t) == pytest.approx(c3, rel=1e-12, abs=1e-12)


def test_gegenbauer_domain_errors():
    with pytest.raises(DomainError):
        gegenbauer_eval(0.0, 2, 0.5)
    with pytest.raises(DomainError):
        gegenbauer_eval(0.5, 2, 1.1)
    # clamped just inside the tolerance
    assert gegenbauer_eval(0.5, 1, 1.0 + 5e-13) == pytest.approx(1.0)


def test_gegenbauer_orthogonality_quadrature():
    # 128-node Gauss-Jacobi rule with the Gegenbauer weight (1-t^2)^(lam-1/2):
    # the products are polynomials, so the quadrature is exact up to rounding
    for lam in (0.5, 1.0, 1.5):
        nodes, weights = roots_jacobi(128, lam - 0.5, lam - 0.5)
        for l1 in range(7):
            for l2 in range(7):
                if l1 == l2:
                    continue
                vals = np.array([gegenbauer_eval(lam, l1, t) *
                                 gegenbauer_eval(lam, l2, t) for t in nodes])
                assert abs(weights @ vals) < 1e-8


# -- Jacobi -------------------------------------------------------------------

def test_jacobi_known_values():
    assert jacobi_eval(1.0, 0.0, 3, 1.0) == pytest.approx(4.0, abs=1e-12)
    assert jacobi_eval(1.0, 0.0, 0, 0.3) == 1.0
    # explicit degree-2 expansion for (alpha, beta) = (1, 0.5)
    a, b, t = 1.0, 0.5, 0.2
    p2 = (0.125 * (a + b + 3) * (a + b + 4) * (t - 1) ** 2
          + 0.5 * (a + 2) * (a + b + 3) * (t - 1) + 0.5 * (a + 1) * (a + 2))
    assert jacobi_eval(a, b, 2, t) == pytest.approx(p2, rel=1e-12)


def test_jacobi_matches_reference_impl():
    rng = np.random.default_rng(55)
    for _ in range(200):
        a = float(rng.uniform(-0.9, 3.0))
        b = float(rng.uniform(-0.9, 3.0))
        ell = int(rng.integers(0, 8))
        t = float(rng.uniform(-1.0, 1.0))
        assert jacobi_eval(a, b, ell, t) == pytest.approx(
            float(eval_jacobi(ell, a, b, t)), rel=1e-11, abs=1e-11)


# -- eigendata ----------------------------------------------------------------

def test_sphere_eigen_values():
    e = sphere_eigen(2, 3)
    assert e.lam == 12.0 and e.mult == 7
    assert sphere_eigen(4, 0).lam == 0.0 and sphere_eigen(4, 0).mult == 1
    assert sphere_eigen(3, 1).lam == 3.0 and sphere_eigen(3, 1).mult == 4


def test_sphere_eigen_brute_force_binomials():
    for d in range(2, 6):
        for ell in range(0, 12):
            e = sphere_eigen(d, ell)
            if ell == 0:
                expected = 1
            else:
                expected = math.comb(ell + d, d) - (
                    math.comb(ell + d - 2, d) if ell >= 2 else 0)
            assert e.mult == expected >= 1
            assert e.lam == ell * (ell + d - 1)


def test_sphere_eigen_large_degree_exact_integers():
    e = sphere_eigen(6, 10_000)
    assert isinstance(e.mult, int) and e.mult > 0


def test_zonal_values():
    assert zonal_eval(2, 3, 1.0) == pytest.approx(7.0, abs=1e-9)
    for t in np.linspace(-1, 1, 9):
        assert zonal_eval(2, 1, t) == pytest.approx(3.0 * t, abs=1e-14)
    assert zonal_eval(3, 2, 0.0) == pytest.approx(-3.0, abs=1e-12)


def test_zonal_at_one_equals_multiplicity():
    for d in range(2, 6):
        for ell in range(0, 15):
            mult = sphere_eigen(d, ell).mult
            assert abs(zonal_eval(d, ell, 1.0) - mult) < 1e-9 * max(mult, 1)


# -- gamma ratio ---------------------------------------------------------------

def test_log_gamma_ratio_identities():
    assert log_gamma_ratio(1.5, 0.5) == pytest.approx(math.log(0.5), abs=1e-14)
    assert log_gamma_ratio(3.0, 1.0) == pytest.approx(math.log(2.0), abs=1e-14)


def test_log_gamma_ratio_high_precision():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    rng = np.random.default_rng(12)
    for _ in range(60):
        a = float(rng.uniform(0.3, 30.0))
        b = float(rng.uniform(0.3, 30.0))
        ref = float(mp.log(mp.gamma(a) / mp.gamma(b)))
        assert log_gamma_ratio(a, b) == pytest.approx(ref, rel=1e-12, abs=1e-12)
    # product-form reduction
    ref = math.log(1.75) + log_gamma_ratio(1.75, 1.25)
    assert log_gamma_ratio(2.75, 1.25) == pytest.approx(ref, rel=1e-13)

    with pytest.raises(DomainError):
        log_gamma_ratio(-1.0, 2.0)


# -- lattice shells -------------------------------------------------------------

def test_lattice_shells_small_cases():
    got = sorted(tuple(v) for v in lattice_shells(1, 2.0).all_vectors())
    assert got == [(-2,), (-1,), (1,), (2,)]
    got = sorted(tuple(v) for v in lattice_shells(2, 1.0).all_vectors())
    assert got == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert lattice_shells(2, 2.5).total_points == 20


def test_lattice_shells_match_brute_force_counts():
    for max_norm in (3.0, 7.5, 14.0, 30.0):
        it = lattice_shells(2, max_norm, max_points=5_000_000)
        r = int(math.floor(max_norm))
        brute = 0
        for i in range(-r, r + 1):
            for j in range(-r, r + 1):
                if 0 < i * i + j * j <= max_norm * max_norm:
                    brute += 1
        assert it.total_points == brute


def test_lattice_shells_ordering_and_uniqueness():
    it = lattice_shells(3, 4.0)
    seen = set()
    prev = 0
    for shell in it:
        assert shell.norm_sq > prev
        prev = shell.norm_sq
        for v in shell.vectors:
            assert tuple(v) not in seen
            assert 0 < (v ** 2).sum() == shell.norm_sq
            seen.add(tuple(v))


def test_lattice_shells_resource_cap():
    with pytest.raises(ResourceLimit):
        lattice_shells(4, 100.0, max_points=1000)
    with pytest.raises(DomainError):
        lattice_shells(5, 2.0)
