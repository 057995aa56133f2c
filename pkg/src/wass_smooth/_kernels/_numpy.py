"""Pure NumPy implementations of the hot kernels.

These mirror the signatures of the compiled module `_ext` and are selected
at import time when the extension is unavailable (or when the environment
variable WASS_SMOOTH_PURE is set).
"""

import numpy as np

BACKEND = "numpy"


def zonal_series(tvals, coefs, d, lmax):
    """Accumulate weighted zonal function values degree by degree.

    Computes out[l] = sum_j coefs[j] * Z_l(tvals[j]) for l = 0..lmax, where
    Z_l(t) = ((2l+d-1)/(d-1)) * C_l^{(d-1)/2}(t) is the degree-l zonal
    function of the d-sphere (Z_l(1) equals the eigenspace dimension).

    Parameters
    ----------
    tvals : float64 array, cosines of pairwise angles in [-1, 1]
    coefs : float64 array, same length, bilinear weights
    d : sphere dimension >= 2
    lmax : highest degree, >= 0

    Returns
    -------
    float64 array of length lmax + 1
    """
    t = np.asarray(tvals, dtype=np.float64)
    c = np.asarray(coefs, dtype=np.float64)
    lam = 0.5 * (d - 1)
    out = np.empty(lmax + 1, dtype=np.float64)
    # Gegenbauer three-term recurrence carried on the whole array.
    g_prev = np.ones_like(t)
    out[0] = c.sum()
    if lmax == 0:
        return out
    g_curr = 2.0 * lam * t
    out[1] = ((2.0 + d - 1.0) / (d - 1.0)) * (c @ g_curr)
    for ell in range(2, lmax + 1):
        g_next = (2.0 * (ell + lam - 1.0) * t * g_curr - (ell + 2.0 * lam - 2.0) * g_prev) / ell
        g_prev, g_curr = g_curr, g_next
        out[ell] = ((2.0 * ell + d - 1.0) / (d - 1.0)) * (c @ g_curr)
    return out


def cyclic_costs(upos, uw, vpos, vw, alphas, p):
    """Transport cost of the shifted quantile coupling, one value per shift.

    Atoms `upos`/`vpos` are sorted positions in [0, 1) on the circle with
    weights summing to one.  For shift alpha, mass at quantile level q of the
    first measure is matched with the level (q - alpha) mod 1 of the second;
    the per-pair cost is the geodesic circle distance to the power p.

    Returns the coupling costs (summed, not rooted).
    """
    upos = np.asarray(upos, dtype=np.float64)
    vpos = np.asarray(vpos, dtype=np.float64)
    ucum = np.cumsum(np.asarray(uw, dtype=np.float64))
    vcum = np.cumsum(np.asarray(vw, dtype=np.float64))
    ucum[-1] = 1.0
    vcum[-1] = 1.0
    n, m = len(upos), len(vpos)
    out = np.empty(len(alphas), dtype=np.float64)
    for a_idx, alpha in enumerate(np.asarray(alphas, dtype=np.float64)):
        a = alpha % 1.0
        ev = np.sort(np.concatenate((ucum, (vcum + a) % 1.0, [1.0])))
        starts = np.concatenate(([0.0], ev[:-1]))
        mass = ev - starts
        mids = 0.5 * (starts + ev)
        i = np.minimum(np.searchsorted(ucum, mids, side="right"), n - 1)
        j = np.minimum(np.searchsorted(vcum, (mids - a) % 1.0, side="right"), m - 1)
        diff = np.abs(upos[i] - vpos[j])
        dist = np.minimum(diff, 1.0 - diff)
        out[a_idx] = mass @ dist**p
    return out
