"""Tests for the special-function kernels."""

import math

import mpmath
import numpy as np
import pytest
import scipy.special

from jgreens.errors import CoulombWaveFailure, HypergeometricNoConverge
from jgreens.special import (
    coulomb_f,
    coulomb_sigma,
    gauss_laguerre_scaled,
    gauss_legendre,
    genlaguerre_table,
    hyp2f1,
)

mpmath.mp.dps = 30


def mp_hyp2f1(a, b, c, z) -> complex:
    return complex(mpmath.hyp2f1(mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(c), mpmath.mpc(z)))


# ---------------------------------------------------------------- hyp2f1


def test_hyp2f1_trivial_values():
    assert hyp2f1(0.7, 1.0, 2.3, 0.0) == 1.0 + 0j
    # 2F1(a, b; b; z) = (1-z)^(-a) holds for the plain series route
    got = hyp2f1(1.7, 2.0, 2.0, 0.35)
    assert got == pytest.approx((1 - 0.35) ** (-1.7), rel=1e-13)


def test_hyp2f1_log_identity():
    # 2F1(1, 1; 2; z) = -log(1-z)/z
    for z in (0.4, -0.7, 0.2 + 0.6j):
        got = hyp2f1(1.0, 1.0, 2.0, z)
        assert got == pytest.approx(-np.log(1 - z) / z, rel=1e-13)


def test_hyp2f1_terminating_polynomial():
    # a = -3 truncates the series after four terms
    a, c, z = -3.0, 1.7 + 0.4j, 0.96
    got = hyp2f1(a, 1.0, c, z)
    total = 1.0 + 0j
    term = 1.0 + 0j
    for n in range(3):
        term *= (a + n) * (1 + n) / ((c + n) * (1 + n)) * z
        total += term
    assert got == pytest.approx(total, rel=1e-14)


def test_hyp2f1_inside_disk_random():
    rng = np.random.default_rng(20260815)
    for _ in range(40):
        a = complex(rng.uniform(-4, 3), rng.uniform(-3, 3))
        b = complex(rng.uniform(0.5, 2.5), rng.uniform(-1, 1))
        c = complex(rng.uniform(0.5, 6), rng.uniform(-3, 3))
        z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.5, 0.5))
        got = hyp2f1(a, b, c, z)
        assert got == pytest.approx(mp_hyp2f1(a, b, c, z), rel=5e-12)


def test_hyp2f1_unit_circle_transform():
    # scattering-type arguments: |z| = 1 away from 1, reached via z/(z-1)
    rng = np.random.default_rng(42)
    for _ in range(25):
        a = complex(rng.uniform(-3, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(1.0, 5), rng.uniform(-2, 2))
        phi = rng.uniform(1.1, math.pi)
        z = complex(math.cos(phi), math.sin(phi))
        got = hyp2f1(a, 1.0, c, z)
        assert got == pytest.approx(mp_hyp2f1(a, 1.0, c, z), rel=5e-12)


def test_hyp2f1_left_plane_transform():
    rng = np.random.default_rng(99)
    for _ in range(20):
        a = complex(rng.uniform(-3, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(1.0, 5), rng.uniform(-2, 2))
        z = complex(rng.uniform(-8, -1), rng.uniform(-2, 2))
        got = hyp2f1(a, 1.0, c, z)
        assert got == pytest.approx(mp_hyp2f1(a, 1.0, c, z), rel=5e-12)


def test_hyp2f1_real_axis_fallback_above_090():
    # direct route is mandated off, transform argument leaves the disk,
    # fallback to the still-convergent series must kick in
    got = hyp2f1(0.8, 1.0, 2.6, 0.93)
    assert got == pytest.approx(mp_hyp2f1(0.8, 1.0, 2.6, 0.93), rel=1e-11)


def test_hyp2f1_near_one_raises():
    z = complex(math.cos(0.1), math.sin(0.1))
    with pytest.raises(HypergeometricNoConverge):
        hyp2f1(0.3 + 0.2j, 1.0, 2.0, z)


def test_hyp2f1_c_nonpositive_integer_raises():
    with pytest.raises(HypergeometricNoConverge):
        hyp2f1(0.5, 1.0, -2.0, 0.3)


# ---------------------------------------------------------------- coulomb_f


def test_coulomb_wave_against_reference_grid():
    worst = 0.0
    for l in (0, 1, 2, 4):
        for eta in (-1.5, -0.2, 0.0, 0.16, 1.0, 2.83, 4.3):
            for rho in (0.05, 0.5, 1.0, 3.0, 6.0, 9.0, 11.9, 12.5, 14.0, 20.0, 50.0, 120.0):
                got = coulomb_f(l, eta, rho)
                ref = float(mpmath.coulombf(l, eta, rho))
                err = abs(got - ref) / max(abs(ref), 1e-3)
                worst = max(worst, err)
    assert worst < 1e-9


def test_coulomb_wave_dense_oscillatory_sweep():
    # dense rho sweep crosses many nodes; catches any sign-tracking slip
    for eta in (0.0, 0.9, 2.83):
        for rho in np.arange(12.1, 80.0, 1.7):
            got = coulomb_f(0, eta, float(rho))
            ref = float(mpmath.coulombf(0, eta, rho))
            assert got == pytest.approx(ref, abs=1e-10 + 1e-10 * abs(ref))


def test_coulomb_wave_free_limit_is_riccati_bessel():
    for l in (0, 2, 4):
        for rho in (0.3, 7.0, 25.0):
            got = coulomb_f(l, 0.0, rho)
            ref = rho * scipy.special.spherical_jn(l, rho)
            assert got == pytest.approx(ref, abs=1e-12)


def test_coulomb_wave_extreme_eta_raises():
    with pytest.raises(CoulombWaveFailure):
        coulomb_f(0, 15.0, 5.0)


def test_coulomb_wave_rejects_nonpositive_rho():
    with pytest.raises(ValueError):
        coulomb_f(0, 1.0, 0.0)


def test_coulomb_sigma_matches_gamma_argument():
    # continuous branch; compare phase factors so 2*pi offsets cancel
    for l in (0, 1, 3):
        for eta in (-2.0, 0.37, 5.0):
            ref = complex(mpmath.exp(1j * mpmath.arg(mpmath.gamma(l + 1 + 1j * eta))))
            got = complex(np.exp(1j * coulomb_sigma(l, eta)))
            assert got == pytest.approx(ref, abs=1e-13)


def test_coulomb_sigma_vanishes_at_zero_eta():
    assert coulomb_sigma(2, 0.0) == 0.0


# ---------------------------------------------------------------- laguerre


def test_genlaguerre_table_against_scipy():
    x = np.linspace(0.01, 60.0, 37)
    tab = genlaguerre_table(25, 3.5, x)
    for k in (0, 1, 2, 7, 18, 25):
        ref = scipy.special.eval_genlaguerre(k, 3.5, x)
        assert np.max(np.abs(tab[k] - ref) / np.maximum(np.abs(ref), 1.0)) < 1e-10


def test_genlaguerre_table_scalar_shape():
    tab = genlaguerre_table(3, 0.0, np.array(2.0))
    assert tab.shape == (4,)
    assert tab[1] == pytest.approx(-1.0)


# ---------------------------------------------------------------- quadrature


def test_gauss_laguerre_scaled_matches_scipy_low_order():
    x, w = gauss_laguerre_scaled(64)
    xr, wr = scipy.special.roots_laguerre(64)
    assert np.max(np.abs(x - xr) / xr) < 1e-12
    scaled_ref = wr * np.exp(xr)
    assert np.max(np.abs(w - scaled_ref) / scaled_ref) < 1e-10


@pytest.mark.parametrize("order", [200, 400])
def test_gauss_laguerre_scaled_moments_high_order(order):
    x, w = gauss_laguerre_scaled(order)
    assert np.all(np.isfinite(w))
    for k in (0, 1, 5, 12, 25):
        val = float(np.sum(w * x**k * np.exp(-x)))
        assert val == pytest.approx(math.factorial(k), rel=1e-10)


def test_gauss_laguerre_scaled_exponential_integral():
    # integral of exp(-3x) over [0, inf) = 1/3 with the weight absorbed
    x, w = gauss_laguerre_scaled(200)
    val = float(np.sum(w * np.exp(-3.0 * x)))
    assert val == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_gauss_legendre_cached_polynomial_exactness():
    x, w = gauss_legendre(24)
    assert float(np.sum(w * x**8)) == pytest.approx(2.0 / 9.0, rel=1e-13)
    again_x, _ = gauss_legendre(24)
    assert again_x is x
