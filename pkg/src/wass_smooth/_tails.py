"""Certified majorants for truncated spectral series.

Every bound that sums an infinite Fourier series is truncated at a finite
window; the functions here produce upper bounds on the omitted mass using
only |mu_hat - nu_hat| <= 2 (torus) or E_l <= 4 d_l (sphere) plus the decay
of the smoothing weights.  The majorants for the supremum-norm weights are
valid for every smoothing parameter at or above the reference value passed
at table-construction time.

All remainders of numeric partial sums are closed (a geometric ratio whose
per-step bound is provably nonincreasing, or a Gaussian integral in log
coordinates), so the returned values are genuine upper bounds; a relative
safety factor absorbs floating-point rounding of the partial sums.
"""

from __future__ import annotations

import math

from scipy.special import log_ndtr

_SAFETY = 1.0 + 1e-12
_LOG2 = math.log(2.0)
_EXP_FLOOR = -745.0  # exp() underflows to 0 a little below this


def theta3(s: float) -> float:
    """Jacobi theta value sum_{n in Z} exp(-s n^2) for s > 0.

    Uses the modular identity theta(s) = sqrt(pi/s) theta(pi^2/s) for small
    s, so only rapidly converging series are ever summed.
    """
    if s <= 0:
        raise ValueError("theta3 requires s > 0")
    if s < math.pi:
        return math.sqrt(math.pi / s) * theta3(math.pi * math.pi / s)
    total = 1.0
    n = 1
    while True:
        term = math.exp(-s * n * n)
        total += 2.0 * term
        if term < 1e-18 * total:
            break
        n += 1
    return total * _SAFETY


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def shell_count_ub(d: int, r_lo: float, r_hi: float) -> float:
    """Upper bound on #{k in Z^d : r_lo <= |k| < r_hi} via unit-cube packing."""
    h = 0.5 * math.sqrt(d)
    hi = (r_hi + h) ** d
    lo = max(r_lo - h, 0.0) ** d
    return ball_volume(d) * (hi - lo)


def gauss_tail_integral(kappa: float, beta: float, const: float, lo: float) -> float:
    """Closed form of int_lo^inf exp(-kappa u^2 + beta u + const) du.

    Evaluated in log space throughout (erfc via the normal cdf), so neither
    overflow nor underflow can invalidate the certificate.
    """
    arg = math.sqrt(kappa) * (lo - beta / (2.0 * kappa))
    log_val = (math.log(0.5) + 0.5 * math.log(math.pi / kappa)
               + const + beta * beta / (4.0 * kappa)
               + _LOG2 + float(log_ndtr(-arg * math.sqrt(2.0))))
    return math.exp(max(log_val, _EXP_FLOOR)) * _SAFETY


# ---------------------------------------------------------------------------
# torus heat weights
# ---------------------------------------------------------------------------

def heat_tail_torus(d: int, window: float, t: float, q0: float) -> float:
    """Majorant of sum_{|k| > window} exp(-4 pi^2 |k|^2 q0 t) (2/(2 pi |k|))^{q0}.

    Splits exp(-a|k|^2) = exp(-a|k|^2/2)^2 and majorizes one factor by its
    value at the window edge; the surviving lattice sum is theta3(a/2)^d.
    """
    a = 4.0 * math.pi * math.pi * q0 * t
    log_val = (-q0 * math.log(math.pi * window)
               - 0.5 * a * window * window
               + d * math.log(theta3(0.5 * a)))
    return math.exp(max(log_val, _EXP_FLOOR)) * _SAFETY


# ---------------------------------------------------------------------------
# torus supremum-norm weights A_k
# ---------------------------------------------------------------------------

def winf_weight_torus(d: int, T: float, knorm: float) -> float:
    """Weight applied to |mu_hat - nu_hat|(k) / (2 pi |k|) in the torus
    supremum-norm bound: 1 below the cutoff (d+3)/(pi T), then a
    log-squared exponential decay."""
    cut = (d + 3.0) / (math.pi * T)
    if knorm < cut:
        return 1.0
    kappa = (d + 1.0) / (4.0 * _LOG2)
    u = math.log(math.pi * T * knorm / (d + 3.0))
    v = math.log(math.e ** 2 * math.pi * T * knorm / (d + 2.0))
    return math.exp(max(-kappa * u * v, _EXP_FLOOR))


def winf_weight_torus_sup(d: int, t_lo: float, knorm: float) -> float:
    """Majorant of winf_weight_torus(d, T, knorm) over all T >= t_lo (the
    weight is continuous and nonincreasing in T once the logs are clamped
    at zero)."""
    kappa = (d + 1.0) / (4.0 * _LOG2)
    u = max(0.0, math.log(math.pi * t_lo * knorm / (d + 3.0)))
    v = max(0.0, math.log(math.e ** 2 * math.pi * t_lo * knorm / (d + 2.0)))
    return math.exp(max(-kappa * u * v, _EXP_FLOOR))


def winf_tail_torus(d: int, t_lo: float, window: float) -> float:
    """Majorant of sum_{|k| > window} A_k(T) * 2/(2 pi |k|) for any T >= t_lo."""
    kappa = (d + 1.0) / (4.0 * _LOG2)
    la = math.log(math.pi * t_lo / (d + 3.0))
    lb = math.log(math.e ** 2 * math.pi * t_lo / (d + 2.0))
    h = 0.5 * math.sqrt(d)
    n0 = max(1, int(math.floor(window)))
    total = 0.0
    n = n0
    while True:
        # shell [n, n+1): weight nonincreasing in |k|, distance factor 1/(pi n)
        total += shell_count_ub(d, n, n + 1.0) * winf_weight_torus_sup(d, t_lo, n) / (math.pi * n)
        u = math.log(n)
        beyond_cut = n > (d + 3.0) / (math.pi * t_lo)
        decreasing = kappa * ((u + la) + (u + lb)) > d - 1.0
        if beyond_cut and decreasing and n >= n0 + 4:
            break
        if n > n0 + 10_000_000:
            raise RuntimeError("supremum-norm tail failed to localize")
        n += 1
    # remaining shells m >= n+1: term(m) <= C m^{d-2} exp(-kappa (u+la)(u+lb))
    # which is decreasing on [n, inf), so the sum is at most the integral
    # from n; substitution u = log x turns it into a Gaussian tail.
    c_pref = ball_volume(d) * d * (1.0 + 2.0 * h) * (2.0 + h) ** (d - 1) / math.pi
    beta = (d - 1.0) - kappa * (la + lb)
    const = math.log(c_pref) - kappa * la * lb
    total += gauss_tail_integral(kappa, beta, const, math.log(n))
    return total * _SAFETY


# ---------------------------------------------------------------------------
# sphere series
# ---------------------------------------------------------------------------

def sphere_mult_ub(d: int, ell: float) -> float:
    """2 (ell + d)^{d-1} / (d-1)!, a closed upper bound on the multiplicity."""
    return 2.0 * (ell + d) ** (d - 1) / math.factorial(d - 1)


def heat_tail_sphere(d: int, lmax: int, t: float, q0: float) -> float:
    """Majorant of sum_{l > lmax} d_l exp(-lambda_l q0 t) (4/lambda_l)^{q0/2}."""
    def term(ell: int) -> float:
        lam = float(ell) * (ell + d - 1)
        logv = (math.log(sphere_mult_ub(d, ell)) - lam * q0 * t
                + 0.5 * q0 * math.log(4.0 / lam))
        return math.exp(max(logv, _EXP_FLOOR))

    def ratio_ub(ell: int) -> float:
        # term(l+1)/term(l) <= multiplicity growth * Gaussian step; the
        # (lambda_l / lambda_{l+1})^{q0/2} factor is < 1 and dropped, making
        # this bound provably nonincreasing in l
        growth = ((ell + 1.0 + d) / (ell + d)) ** (d - 1)
        return growth * math.exp(-q0 * t * (2.0 * ell + d))

    total = 0.0
    ell = lmax + 1
    while True:
        t_here = term(ell)
        total += t_here
        rho = ratio_ub(ell)
        if rho < 0.5:
            total += t_here * rho / (1.0 - rho)
            return total * _SAFETY
        if ell > lmax + 10_000_000:
            raise RuntimeError("sphere heat tail failed to localize")
        ell += 1


def winf_weight_sphere(d: int, T: float, ell: float) -> float:
    """Weight on (d_l E_l / lambda_l)^{1/2} in the sphere supremum-norm bound."""
    if ell <= 2.0 ** (d + 2) / T:
        return 1.0
    u = math.log(T * ell / 16.0)
    v = math.log(T * ell / 2.0 ** (d + 2))
    return 43.0 * math.exp(max(-u * v / _LOG2, _EXP_FLOOR))


def winf_weight_sphere_sup(d: int, t_lo: float, ell: float) -> float:
    """Majorant of winf_weight_sphere over all T >= t_lo.

    The weight jumps from 1 to 43 at the cutoff, so it is not monotone in T;
    clamping both logs at zero dominates the pre-cutoff branch (43 >= 1) as
    well as every post-cutoff value.
    """
    u = max(0.0, math.log(t_lo * ell / 16.0))
    v = max(0.0, math.log(t_lo * ell / 2.0 ** (d + 2)))
    return 43.0 * math.exp(max(-u * v / _LOG2, _EXP_FLOOR))


def winf_tail_sphere(d: int, t_lo: float, lmax: int) -> float:
    """Majorant of sum_{l > lmax} A_l(T) (d_l E_l / lambda_l)^{1/2}, T >= t_lo.

    Uses E_l <= 4 d_l and lambda_l >= l^2, so each term is at most
    A_l * 2 d_l / l.
    """
    kappa = 1.0 / _LOG2
    la = math.log(t_lo / 16.0)
    lb = math.log(t_lo / 2.0 ** (d + 2))
    total = 0.0
    ell = lmax + 1
    while True:
        total += winf_weight_sphere_sup(d, t_lo, ell) * 2.0 * sphere_mult_ub(d, ell) / ell
        u = math.log(ell)
        beyond_cut = ell * t_lo > 2.0 ** (d + 2)
        decreasing = kappa * ((u + la) + (u + lb)) > d - 1.0
        if beyond_cut and decreasing and ell >= lmax + 5:
            break
        if ell > lmax + 10_000_000:
            raise RuntimeError("sphere supremum-norm tail failed to localize")
        ell += 1
    # remaining degrees m >= ell+1: 43 and the 2*mult/l factor fold into
    # c_pref * m^{d-2}, decreasing beyond the checkpoint
    c_pref = 43.0 * 4.0 * (1.0 + d) ** (d - 1) / math.factorial(d - 1)
    beta = (d - 1.0) - kappa * (la + lb)
    const = math.log(c_pref) - kappa * la * lb
    total += gauss_tail_integral(kappa, beta, const, math.log(ell))
    return total * _SAFETY


# ---------------------------------------------------------------------------
# shell-grouped heat tail for spectra flattened from a torus window
# ---------------------------------------------------------------------------

def manifold_gt2_tail_torus(d: int, window: float, t: float, q: float,
                            weyl_exp: float, ricci_a: float) -> float:
    """Majorant of the omitted shell mass in the p > 2 manifold heat bound
    when the spectrum came from a torus lattice window (|k| <= window).

    Omitted entries have sqrt(eigenvalue) = 2 pi |k| > 2 pi window; shell l
    collects square roots in [l, l+1).  Since q/2 < 1, x^{q/2} is
    subadditive and partially retained shells may be split between the
    retained sum and this majorant.
    """
    two_pi = 2.0 * math.pi
    h = 0.5 * math.sqrt(d)
    ell0 = max(1, int(math.floor(two_pi * window)))
    # closed shell-count form, monotone in l: V_d d (1/(2pi) + 2h) (l+1+2pi h)^{d-1}/(2pi)^{d-1}
    count_pref = ball_volume(d) * d * (1.0 / two_pi + 2.0 * h) / two_pi ** (d - 1)

    def inner_ub(ell: float) -> float:
        lam_lo = ell * ell
        return (count_pref * (ell + 1.0 + two_pi * h) ** (d - 1)
                * 4.0 * math.exp(max(-2.0 * lam_lo * t, _EXP_FLOOR))
                / (lam_lo + (d - 1.0) * ricci_a))

    def term(ell: float) -> float:
        return (ell + 1.0) ** weyl_exp * inner_ub(ell) ** (0.5 * q)

    def ratio_ub(ell: float) -> float:
        # every factor below is nonincreasing in l
        outer = ((ell + 2.0) / (ell + 1.0)) ** weyl_exp
        count = ((ell + 2.0 + two_pi * h) / (ell + 1.0 + two_pi * h)) ** (d - 1)
        gauss = math.exp(-2.0 * t * (2.0 * ell + 1.0))
        return outer * (count * gauss) ** (0.5 * q)

    total = 0.0
    ell = float(ell0)
    while True:
        total += term(ell)
        rho = ratio_ub(ell)
        if rho < 0.5:
            total += term(ell) * rho / (1.0 - rho)
            return total * _SAFETY
        if ell > ell0 + 10_000_000:
            raise RuntimeError("shell tail failed to localize")
        ell += 1.0


def winf_weight_torus_sup_vec(d: int, t_lo: float, norms):
    """Vectorized winf_weight_torus_sup over an array of norms."""
    import numpy as np

    kappa = (d + 1.0) / (4.0 * _LOG2)
    n = np.asarray(norms, dtype=np.float64)
    u = np.maximum(0.0, np.log(math.pi * t_lo * n / (d + 3.0)))
    v = np.maximum(0.0, np.log(math.e ** 2 * math.pi * t_lo * n / (d + 2.0)))
    return np.exp(np.maximum(-kappa * u * v, _EXP_FLOOR))
