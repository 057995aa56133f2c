"""Backend equivalence: the compiled kernels must agree with the NumPy twins."""

import numpy as np
import pytest
from scipy.special import eval_gegenbauer

from wass_smooth._kernels import BACKEND, _numpy

try:
    from wass_smooth._kernels import _ext
except ImportError:  # pragma: no cover - extension not built
    _ext = None

needs_ext = pytest.mark.skipif(_ext is None, reason="compiled extension unavailable")


def test_some_backend_selected():
    assert BACKEND in ("ext", "numpy")


def zonal_reference(tvals, coefs, d, lmax):
    lam = 0.5 * (d - 1)
    out = np.zeros(lmax + 1)
    for ell in range(lmax + 1):
        pref = (2.0 * ell + d - 1.0) / (d - 1.0)
        out[ell] = pref * float(coefs @ eval_gegenbauer(ell, lam, tvals))
    return out


@pytest.mark.parametrize("d", [2, 3, 5])
def test_zonal_series_numpy_vs_reference(d):
    rng = np.random.default_rng(d)
    tvals = rng.uniform(-1.0, 1.0, 64)
    coefs = rng.normal(size=64)
    got = _numpy.zonal_series(tvals, coefs, d, 12)
    ref = zonal_reference(tvals, coefs, d, 12)
    assert np.allclose(got, ref, rtol=1e-11, atol=1e-11)


@needs_ext
@pytest.mark.parametrize("d", [2, 3, 5])
def test_zonal_series_backends_agree(d):
    rng = np.random.default_rng(100 + d)
    tvals = rng.uniform(-1.0, 1.0, 200)
    coefs = rng.normal(size=200)
    a = _numpy.zonal_series(tvals, coefs, d, 40)
    b = _ext.zonal_series(tvals, coefs, d, 40)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def brute_cyclic_cost(upos, uw, vpos, vw, alpha, p, grid=20_000):
    """Direct quantile-coupling cost on a dense level grid (approximate)."""
    levels = (np.arange(grid) + 0.5) / grid
    ucum = np.cumsum(uw)
    vcum = np.cumsum(vw)
    i = np.minimum(np.searchsorted(ucum, levels, side="right"), len(upos) - 1)
    j = np.minimum(np.searchsorted(vcum, (levels - alpha) % 1.0, side="right"),
                   len(vpos) - 1)
    diff = np.abs(upos[i] - vpos[j])
    dist = np.minimum(diff, 1.0 - diff)
    return float(np.mean(dist ** p))


@needs_ext
def test_cyclic_costs_backends_agree():
    rng = np.random.default_rng(42)
    for _ in range(25):
        n, m = rng.integers(2, 9, size=2)
        upos = np.sort(rng.random(n))
        vpos = np.sort(rng.random(m))
        uw = rng.random(n); uw /= uw.sum()
        vw = rng.random(m); vw /= vw.sum()
        alphas = rng.random(12)
        a = _numpy.cyclic_costs(upos, uw, vpos, vw, alphas, 2.0)
        b = _ext.cyclic_costs(upos, uw, vpos, vw, alphas, 2.0)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


def test_cyclic_costs_vs_dense_grid():
    rng = np.random.default_rng(43)
    for _ in range(10):
        n, m = rng.integers(2, 6, size=2)
        upos = np.sort(rng.random(n))
        vpos = np.sort(rng.random(m))
        uw = rng.random(n); uw /= uw.sum()
        vw = rng.random(m); vw /= vw.sum()
        alpha = float(rng.random())
        got = float(_numpy.cyclic_costs(upos, uw, vpos, vw, [alpha], 2.0)[0])
        approx = brute_cyclic_cost(upos, uw, vpos, vw, alpha, 2.0)
        assert got == pytest.approx(approx, abs=5e-4)


def test_pure_env_forces_numpy_backend():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c",
         "from wass_smooth._kernels import BACKEND; print(BACKEND)"],
        capture_output=True, text=True, env={"WASS_SMOOTH_PURE": "1", "PATH": "/usr/bin"},
    )
    assert out.stdout.strip() == "numpy"
