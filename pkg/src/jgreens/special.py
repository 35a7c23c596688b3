"""Special-function kernels shared by the model catalog and the solver.

Provides the Gauss hypergeometric function for complex argument, the
regular Coulomb wave function evaluated by series and Steed-type
continued fractions, the Coulomb phase, generalized Laguerre tables,
and overflow-safe Gauss quadrature rules.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.special

from .errors import CoulombWaveFailure, HypergeometricNoConverge

__all__ = [
    "hyp2f1",
    "coulomb_f",
    "coulomb_f_complex",
    "coulomb_sigma",
    "genlaguerre_table",
    "gauss_laguerre_scaled",
    "gauss_legendre",
]

_LENTZ_TINY = 1e-300


def _gauss_series(a, b, c, z, tol, max_terms):
    """Sum the defining hypergeometric series; None when it stalls."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    small_streak = 0
    for n in range(max_terms):
        denom = (c + n) * (1 + n)
        if abs(denom) < 1e-15 * (abs(c) + n + 1):
            # c at a nonpositive integer: the function has a pole there
            return None
        term *= (a + n) * (b + n) / denom * z
        if term == 0:
            return total  # terminating polynomial case
        total += term
        if abs(term) <= tol * max(abs(total), 1e-300):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    return None


def hyp2f1(a, b, c, z, *, tol=1e-14, max_terms=50000):
    """Gauss hypergeometric function 2F1(a, b; c; z) for complex argument.

    Uses the defining series inside |z| < 0.9 and the z/(z-1) argument
    transformation otherwise, falling back to whichever route converges.

    Parameters
    ----------
    a, b, c : complex
        Function parameters; c must not be a nonpositive integer.
    z : complex
        Argument.
    tol : float, optional
        Relative term size at which the series is declared converged.
    max_terms : int, optional
        Series length budget per route.

    Returns
    -------
    complex

    Raises
    ------
    HypergeometricNoConverge
        If no route converges (argument on the unit circle near 1, or
        c at a nonpositive integer).
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    z = complex(z)
    if z == 0:
        return 1.0 + 0j
    w = z / (z - 1.0) if z != 1.0 else None

    def direct():
        return _gauss_series(a, b, c, z, tol, max_terms)

    def transformed():
        inner = _gauss_series(a, c - b, c, w, tol, max_terms)
        if inner is None:
            return None
        return (1.0 - z) ** (-a) * inner

    routes = []
    if abs(z) < 0.9:
        routes.append(direct)
        if w is not None and abs(w) < 1.0:
            routes.append(transformed)
    else:
        if w is not None and abs(w) < 1.0:
            routes.append(transformed)
        if abs(z) < 1.0:
            routes.append(direct)
    for route in routes:
        value = route()
        if value is not None:
            return value
    raise HypergeometricNoConverge(
        f"no series route converged for z={z!r} (|z|={abs(z):.6f})"
    )


def coulomb_sigma(l, eta):
    """Coulomb phase shift sigma_l = arg Gamma(l + 1 + i*eta)."""
    return float(scipy.special.loggamma(complex(l + 1, eta)).imag)


def _coulomb_series(l, eta, rho):
    """Power-series evaluation of F_l; valid while cancellation is mild."""
    log_norm = (
        l * math.log(2.0)
        - math.pi * eta / 2.0
        + scipy.special.loggamma(complex(l + 1, eta)).real
        - math.lgamma(2 * l + 2)
    )
    t_prev = 1.0
    t_cur = eta * rho / (l + 1)
    total = t_prev + t_cur
    max_term = max(abs(t_prev), abs(t_cur))
    for m in range(2, 100000):
        t_next = (2.0 * eta * rho * t_cur - rho * rho * t_prev) / ((2 * l + 1 + m) * m)
        total += t_next
        max_term = max(max_term, abs(t_next))
        if abs(t_next) <= 1e-17 * abs(total) and abs(t_cur) <= 1e-17 * abs(total):
            break
        t_prev, t_cur = t_cur, t_next
    else:
        raise CoulombWaveFailure(
            f"series did not converge for l={l}, eta={eta}, rho={rho}"
        )
    scale = math.exp(log_norm + (l + 1) * math.log(rho))
    value = scale * total
    abs_err = 5e-16 * scale * max_term
    if abs_err > 1e-10 * max(1.0, abs(value)):
        raise CoulombWaveFailure(
            f"series cancellation too severe for l={l}, eta={eta}, rho={rho}"
        )
    return value


def _coulomb_f_series_cplx(l, eta, rho_arr):
    """Power-series F_l for complex arguments; (values, relative error)."""
    log_norm = (
        l * math.log(2.0)
        - math.pi * eta / 2.0
        + 0.5 * (scipy.special.loggamma(l + 1 + 1j * eta)
                 + scipy.special.loggamma(l + 1 - 1j * eta))
        - math.lgamma(2 * l + 2)
    )
    t_prev = np.ones_like(rho_arr)
    t_cur = eta * rho_arr / (l + 1)
    total = t_prev + t_cur
    max_term = np.maximum(np.abs(t_prev), np.abs(t_cur))
    for m in range(2, 2000):
        t_next = ((2.0 * eta * rho_arr * t_cur - rho_arr * rho_arr * t_prev)
                  / ((2 * l + 1 + m) * m))
        total = total + t_next
        np.maximum(max_term, np.abs(t_next), out=max_term)
        bound = 1e-17 * np.abs(total)
        if np.all(np.abs(t_next) <= bound) and np.all(np.abs(t_cur) <= bound):
            break
        t_prev, t_cur = t_cur, t_next
    else:
        raise CoulombWaveFailure(
            f"series did not converge for l={l}, eta={eta}")
    scale = np.exp(log_norm + (l + 1) * np.log(rho_arr))
    value = scale * total
    abs_err = 5e-16 * np.abs(scale) * max_term
    return value, abs_err / np.maximum(1.0, np.abs(value))


def _asym_sum(a, b, z):
    """Optimally truncated 2F0-type sum 1 + sum (a)_n (b)_n / (n! z^n).

    Terms are accumulated per component until they start growing; the
    magnitude of the first growing term estimates the truncation error.
    """
    term = np.ones_like(z)
    total = np.ones_like(z)
    err = np.full(z.shape, np.inf)
    frozen = np.zeros(z.shape, dtype=bool)
    for n in range(1, 400):
        t_next = term * (a + n - 1) * (b + n - 1) / (n * z)
        growing = (np.abs(t_next) >= np.abs(term)) & ~frozen
        err[growing] = np.abs(term[growing])
        frozen |= growing
        term = np.where(frozen, 0.0, t_next)
        total = total + term
        tiny = np.abs(term) <= 1e-17 * np.abs(total)
        if np.all(frozen | tiny):
            err[~frozen] = np.abs(term[~frozen])
            break
    return total, err


def _coulomb_f_asym_cplx(l, eta, rho_arr):
    """Asymptotic F_l = (H+ - H-)/2i for complex args; (values, rel err)."""
    sigma = (scipy.special.loggamma(l + 1 + 1j * eta)
             - scipy.special.loggamma(l + 1 - 1j * eta)) / 2j
    theta = (rho_arr - eta * np.log(2.0 * rho_arr)
             - l * math.pi / 2.0 + sigma)
    sum_p, err_p = _asym_sum(l + 1 + 1j * eta, -l + 1j * eta,
                             2j * rho_arr)
    sum_m, err_m = _asym_sum(l + 1 - 1j * eta, -l - 1j * eta,
                             -2j * rho_arr)
    up = np.exp(1j * theta)
    um = np.exp(-1j * theta)
    value = (up * sum_p - um * sum_m) / 2j
    abs_err = 0.5 * (err_p * np.abs(up) + err_m * np.abs(um))
    return value, abs_err / np.maximum(1.0, np.abs(value))


# Modulus below which the complex power series beats the asymptotic
# Hankel sums; chosen where their accuracy curves cross (~1e-12).
_COMPLEX_SWITCH_RHO = 14.0


def coulomb_f_complex(l, eta, rho):
    """Regular Coulomb wave F_l continued to complex eta and rho.

    Vectorized over rho.  Small moduli use the defining power series in
    complex arithmetic with the normalization continued as
    sqrt(Gamma(l+1+i eta) Gamma(l+1-i eta)); large moduli combine the
    outgoing and incoming solutions, each evaluated from its optimally
    truncated asymptotic sum.  Per-point error estimates guard both
    routes, so arguments in the gap where neither converges raise
    instead of returning silently degraded values.

    Parameters
    ----------
    l : int
        Orbital angular momentum, >= 0.
    eta : complex
        Sommerfeld parameter, |eta| <= 12.
    rho : complex or ndarray of complex
        Radial arguments with positive real part.

    Returns
    -------
    ndarray of complex
        F_l(eta, rho), shaped like rho.

    Raises
    ------
    CoulombWaveFailure
        Extreme eta, non-convergence, or estimated error beyond 1e-8.
    """
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    eta = complex(eta)
    if abs(eta) > 12.0:
        raise CoulombWaveFailure(f"extreme Sommerfeld parameter eta={eta}")
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=complex))
    if np.any(rho_arr.real <= 0):
        raise ValueError("rho must have positive real part")
    value = np.empty_like(rho_arr)
    rel_err = np.zeros(rho_arr.shape)
    small = np.abs(rho_arr) <= _COMPLEX_SWITCH_RHO
    if np.any(small):
        value[small], rel_err[small] = _coulomb_f_series_cplx(
            l, eta, rho_arr[small])
    if np.any(~small):
        value[~small], rel_err[~small] = _coulomb_f_asym_cplx(
            l, eta, rho_arr[~small])
    if np.any(rel_err > 1e-8):
        worst = float(np.max(rel_err))
        raise CoulombWaveFailure(
            f"requested accuracy unreachable for l={l}, eta={eta}: "
            f"worst relative error estimate {worst:.2e}")
    return value if np.ndim(rho) else complex(value[0])


def _cf1(l, eta, rho, *, tol=1e-15, max_iter=100000):
    """Logarithmic derivative F'_l/F_l and the sign of F_l."""

    def s_coef(lam):
        return lam / rho + eta / lam

    def r2_coef(lam):
        return 1.0 + (eta / lam) ** 2

    b0 = s_coef(l + 1)
    f = b0 if b0 != 0 else _LENTZ_TINY
    c_val = f
    d_val = 0.0
    sign = 1.0
    for k in range(1, max_iter):
        lam = l + k
        a_k = -r2_coef(lam)
        b_k = s_coef(lam) + s_coef(lam + 1)
        d_val = b_k + a_k * d_val
        if d_val == 0:
            d_val = _LENTZ_TINY
        c_val = b_k + a_k / c_val
        if c_val == 0:
            c_val = _LENTZ_TINY
        d_val = 1.0 / d_val
        if d_val < 0:
            sign = -sign
        delta = c_val * d_val
        f *= delta
        if abs(delta - 1.0) < tol:
            return f, sign
    raise CoulombWaveFailure(
        f"ratio continued fraction stalled for l={l}, eta={eta}, rho={rho}"
    )


def _cf2(l, eta, rho, *, tol=1e-15, max_iter=100000):
    """Outgoing-solution logarithmic derivative p + i q."""
    b0 = 1j * (1.0 - eta / rho)
    f = b0 if b0 != 0 else complex(_LENTZ_TINY)
    c_val = f
    d_val = 0j
    ie = 1j * eta
    for n in range(1, max_iter):
        a_n = (ie - l + n - 1) * (ie + l + n)
        if n == 1:
            # fold the leading i/rho prefactor into the first numerator
            a_n *= 1j / rho
        b_n = 2.0 * (rho - eta + n * 1j)
        d_val = b_n + a_n * d_val
        if d_val == 0:
            d_val = complex(_LENTZ_TINY)
        c_val = b_n + a_n / c_val
        if c_val == 0:
            c_val = complex(_LENTZ_TINY)
        d_val = 1.0 / d_val
        delta = c_val * d_val
        f *= delta
        if abs(delta - 1.0) < tol:
            return f.real, f.imag
    raise CoulombWaveFailure(
        f"outgoing continued fraction stalled for l={l}, eta={eta}, rho={rho}"
    )


def coulomb_f(l, eta, rho):
    """Regular Coulomb wave function F_l(eta, rho).

    Power series near the origin, Steed-type continued fractions in the
    oscillatory region beyond the classical turning point.

    Parameters
    ----------
    l : int
        Orbital angular momentum, >= 0.
    eta : float
        Sommerfeld parameter.
    rho : float
        Radial argument, > 0.

    Returns
    -------
    float

    Raises
    ------
    CoulombWaveFailure
        Extreme Sommerfeld parameter, or loss of accuracy in the series
        in the deep classically forbidden region.
    """
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    eta = float(eta)
    rho = float(rho)
    if not rho > 0:
        raise ValueError("rho must be positive")
    if abs(eta) > 12.0:
        raise CoulombWaveFailure(f"extreme Sommerfeld parameter eta={eta}")
    turning = eta + math.sqrt(eta * eta + l * (l + 1))
    if rho < 12.0 or rho < turning + 0.5:
        return _coulomb_series(l, eta, rho)
    f_ratio, sign = _cf1(l, eta, rho)
    p, q = _cf2(l, eta, rho)
    if q <= 0:
        raise CoulombWaveFailure(
            f"nonpositive Wronskian component for l={l}, eta={eta}, rho={rho}"
        )
    return sign * math.sqrt(q / ((f_ratio - p) ** 2 + q * q))


def genlaguerre_table(n_max, alpha, x):
    """Generalized Laguerre values L_k^(alpha)(x) for k = 0..n_max.

    Upward three-term recurrence, vectorized over the evaluation points.

    Parameters
    ----------
    n_max : int
        Highest degree.
    alpha : float
        Laguerre parameter, > -1.
    x : array_like
        Evaluation points; magnitudes must stay in the non-overflowing
        range for the requested degree.

    Returns
    -------
    ndarray, shape (n_max + 1,) + x.shape
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (
            k + 1
        )
    return out


@lru_cache(maxsize=None)
def gauss_laguerre_scaled(order):
    """Gauss-Laguerre rule with the exponential weight folded back in.

    Returns nodes x_i and scaled weights W_i = w_i * exp(x_i) such that
    integral of g over [0, inf) ~= sum W_i g(x_i) for integrands decaying
    like exp(-x) times a smooth factor.  Stable at high order where the
    raw weights underflow.

    Parameters
    ----------
    order : int
        Number of nodes, >= 1.

    Returns
    -------
    (ndarray, ndarray)
        Nodes in increasing order and scaled weights; both read-only.
    """
    if order < 1:
        raise ValueError("order must be positive")
    diag = np.arange(1, 2 * order, 2, dtype=float)
    off = np.arange(1, order, dtype=float)
    x = scipy.linalg.eigvalsh_tridiagonal(diag, off)
    # Newton polish on the degree-n polynomial through the scaled recurrence
    for _ in range(50):
        l_nm1, l_n, _ = _run_laguerre(order, x)
        dx = -l_n * x / (order * (l_n - l_nm1))
        x = x + dx
        if np.max(np.abs(dx) / x) < 1e-15:
            break
    _, l_np1, log_scale = _run_laguerre(order + 1, x)
    log_w = np.log(x) + x - 2.0 * math.log(order + 1) - 2.0 * (
        np.log(np.abs(l_np1)) + log_scale
    )
    w = np.exp(log_w)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _run_laguerre(top, x):
    """Recur L_k up to k = top with renormalization; returns last pair."""
    x = np.asarray(x, dtype=float)
    lkm1 = np.ones_like(x)
    lk = 1.0 - x
    log_scale = np.zeros_like(x)
    if top == 1:
        return lkm1, lk, log_scale
    for k in range(1, top):
        lkp1 = ((2 * k + 1 - x) * lk - k * lkm1) / (k + 1)
        mag = np.abs(lkp1)
        big = mag > 1e100
        if np.any(big):
            factor = np.where(big, mag, 1.0)
            lkp1 = lkp1 / factor
            lk = lk / factor
            log_scale = log_scale + np.where(big, np.log(factor), 0.0)
        lkm1, lk = lk, lkp1
    return lkm1, lk, log_scale


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Gauss-Legendre rule on [-1, 1], cached; arrays are read-only."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w
