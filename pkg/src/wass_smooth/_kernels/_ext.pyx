# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: zonal recurrence accumulation and cyclic-shift costs.

Signatures match wass_smooth._kernels._numpy; selection happens at import.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "ext"


def zonal_series(tvals, coefs, int d, int lmax):
    """out[l] = sum_j coefs[j] * Z_l(tvals[j]), l = 0..lmax (see _numpy twin)."""
    cdef double[::1] t = np.ascontiguousarray(tvals, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    out_arr = np.zeros(lmax + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t j
    cdef int ell
    cdef double lam = 0.5 * (d - 1)
    cdef double tj, cj, g_prev, g_curr, g_next
    for j in range(n):
        tj = t[j]
        cj = c[j]
        g_prev = 1.0
        out[0] += cj
        if lmax == 0:
            continue
        g_curr = 2.0 * lam * tj
        out[1] += cj * g_curr
        for ell in range(2, lmax + 1):
            g_next = (2.0 * (ell + lam - 1.0) * tj * g_curr
                      - (ell + 2.0 * lam - 2.0) * g_prev) / ell
            g_prev = g_curr
            g_curr = g_next
            out[ell] += cj * g_curr
    # zonal prefactor applied once per degree
    for ell in range(lmax + 1):
        out[ell] *= (2.0 * ell + d - 1.0) / (d - 1.0)
    return out_arr


def cyclic_costs(upos, uw, vpos, vw, alphas, double p):
    """Shifted quantile-coupling costs on the circle (see _numpy twin)."""
    cdef double[::1] up = np.ascontiguousarray(upos, dtype=np.float64)
    cdef double[::1] vp = np.ascontiguousarray(vpos, dtype=np.float64)
    cdef double[::1] ucum = np.cumsum(np.asarray(uw, dtype=np.float64))
    cdef double[::1] vcum = np.cumsum(np.asarray(vw, dtype=np.float64))
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    out_arr = np.empty(al.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n = up.shape[0]
    cdef Py_ssize_t m = vp.shape[0]
    cdef Py_ssize_t a_idx, i, kv, jw, jv
    cdef double a, lev, total, u_next, v_next, nxt, mass, diff, dist
    # ladder tops pinned to 1 so the walk terminates exactly
    ucum[n - 1] = 1.0
    vcum[m - 1] = 1.0

    for a_idx in range(al.shape[0]):
        a = al[a_idx] % 1.0
        # sorted shifted v-events start at the first atom whose cumulative
        # level wraps past 1 (always exists: vcum[m-1] + a >= 1)
        jw = m - 1
        for jv in range(m):
            if vcum[jv] + a >= 1.0:
                jw = jv
                break
        i = 0
        kv = 0
        lev = 0.0
        total = 0.0
        while lev < 1.0:
            u_next = ucum[i] if i < n else 2.0
            if kv < m:
                jv = jw + kv
                if jv >= m:
                    jv -= m
                    v_next = vcum[jv] + a
                else:
                    v_next = vcum[jv] + a - 1.0
            else:
                jv = jw
                v_next = 2.0
            nxt = u_next if u_next < v_next else v_next
            if nxt > 1.0:
                nxt = 1.0
            mass = nxt - lev
            if mass > 0.0:
                diff = up[i if i < n else n - 1] - vp[jv]
                if diff < 0.0:
                    diff = -diff
                dist = diff if diff <= 0.5 else 1.0 - diff
                total += mass * dist**p
            if i < n and u_next <= nxt:
                i += 1
            if kv < m and v_next <= nxt:
                kv += 1
            lev = nxt
        out[a_idx] = total
    return out_arr
