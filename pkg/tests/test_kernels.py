import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pointopt import kernels
from pointopt.errors import ArgumentError, DomainError, PoleError
from pointopt.kernels import (
    EULER_GAMMA,
    bessel_k0,
    bessel_k1,
    complete_monotonicity_check,
    green_free,
    green_loop_negative,
    green_loop_positive,
    xi_regularized,
)

TWO_PI = 2 * math.pi


# --- oracles -----------------------------------------------------------------


def loop_images(kappa, d, n_images=60):
    """Periodised whole-line kernel: sum_n exp(-kappa |d + 2 pi n|) / (2 kappa)."""
    n = np.arange(-n_images, n_images + 1)
    return float(np.sum(np.exp(-kappa * np.abs(d + TWO_PI * n))) / (2 * kappa))


def loop_positive_series(k, d, M=20_000):
    """(1/2pi) sum_m e^{imd}/(m^2-k^2), split as a Bernoulli part plus a 1/m^4 tail."""
    x = (d % TWO_PI) / TWO_PI
    b2 = math.pi**2 * (x * x - x + 1 / 6)
    m = np.arange(1, M + 1, dtype=float)
    rest = np.sum(np.cos(m * d) * k * k / (m * m * (m * m - k * k)))
    return (-1 / (k * k) + 2 * (b2 + rest)) / TWO_PI


# --- Bessel ------------------------------------------------------------------


@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.1, 0.5, 1.0, 1.999, 2.0, 2.001, 3.7, 10.0, 50.0, 300.0, 700.0])
def test_k0_k1_against_mpmath(x):
    assert bessel_k0(x) == pytest.approx(float(mpmath.besselk(0, x)), rel=2e-14)
    assert bessel_k1(x) == pytest.approx(float(mpmath.besselk(1, x)), rel=2e-14)


def test_k0_array_and_underflow_flag():
    xs = np.array([0.5, 5.0, 800.0])
    vals, flags = bessel_k0(xs, with_flag=True)
    assert vals.shape == (3,)
    assert flags.tolist() == [False, False, True]
    assert bessel_k0(1.0, with_flag=True)[1] is False


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_k0_domain(bad):
    with pytest.raises(DomainError):
        bessel_k0(bad)


@given(st.floats(1e-6, 200.0))
def test_k0_positive_decreasing(x):
    assert bessel_k0(x) > 0
    assert bessel_k0(x * 1.01) < bessel_k0(x)


def test_bessel_exp_scaled_matches_unscaled():
    x = np.array([2.5, 20.0, 100.0])
    assert np.allclose(kernels._bessel_k0e(x), np.exp(x) * bessel_k0(x), rtol=1e-14)


# --- loop kernels ------------------------------------------------------------


@pytest.mark.parametrize("kappa", [1e-3, 0.3, 1.0, 4.0, 40.0])
@pytest.mark.parametrize("d", [0.0, 0.4, math.pi, 5.0, TWO_PI])
def test_loop_negative_against_images(kappa, d):
    n_images = max(60, int(60 / kappa))
    if kappa < 0.01:
        # image sum converges too slowly; compare with the small-kappa expansion
        x = d / TWO_PI
        approx = 1 / (TWO_PI * kappa**2) + math.pi * (x * x - x + 1 / 6)
        assert green_loop_negative(kappa, d).value == pytest.approx(approx, rel=1e-9)
        return
    assert green_loop_negative(kappa, d).value == pytest.approx(loop_images(kappa, d, n_images), rel=1e-13)


def test_loop_negative_large_kappa_does_not_overflow():
    v = green_loop_negative(2000.0, math.pi).value
    assert v == pytest.approx(math.exp(-2000 * math.pi) / 4000, rel=1e-12) or v == 0.0
    assert math.isfinite(green_loop_negative(2000.0, 0.0).value)


@pytest.mark.parametrize("k", [0.3, 0.5, 1.5, 2.7])
@pytest.mark.parametrize("d", [0.0, 1.0, math.pi, 4.5])
def test_loop_positive_against_series(k, d):
    assert green_loop_positive(k, d).value == pytest.approx(loop_positive_series(k, d), rel=1e-9, abs=1e-11)


def test_loop_positive_quarter_example():
    # -cos(0) / (2 * 0.25 * sin(pi/4))
    assert green_loop_positive(0.25, math.pi).value == pytest.approx(-2 * math.sqrt(2), rel=1e-14)


def test_loop_positive_pole_guard():
    with pytest.raises(PoleError):
        green_loop_positive(1.0 + 1e-9, 0.5)
    green_loop_positive(1.0 + 1e-6, 0.5)
    with pytest.raises(PoleError):
        green_loop_positive(2.0, 0.5, pole_guard=1e-3)


def test_loop_distance_domain():
    with pytest.raises(DomainError):
        green_loop_negative(1.0, -0.1)
    with pytest.raises(DomainError):
        green_loop_negative(1.0, 7.0)


@given(st.floats(0.05, 30.0), st.floats(0.0, TWO_PI))
def test_loop_negative_reflection_symmetric(kappa, d):
    a = green_loop_negative(kappa, d).value
    b = green_loop_negative(kappa, TWO_PI - d).value
    assert a == pytest.approx(b, rel=1e-12)


@given(st.floats(0.05, 30.0), st.floats(0.0, math.pi - 1e-3))
def test_loop_negative_positive_and_decreasing(kappa, d):
    g0 = green_loop_negative(kappa, d)
    g1 = green_loop_negative(kappa, d + 1e-3)
    assert g0.value > 0
    assert g1.value <= g0.value


@given(st.floats(0.1, 20.0), st.floats(0.01, TWO_PI - 0.01))
def test_loop_negative_derivative_finite_difference(kappa, d):
    h = 1e-6
    kv = green_loop_negative(kappa, d, derivative=True)
    fd = (green_loop_negative(kappa, d + h).value - green_loop_negative(kappa, d - h).value) / (2 * h)
    assert kv.derivative_in_distance == pytest.approx(fd, rel=1e-5, abs=1e-9 * max(1.0, abs(kv.value)))


def test_loop_derivative_jump_at_coincidence():
    # -G'' + kappa^2 G = delta: one-sided slopes at d = 0 are -1/2 and +1/2 at 2 pi
    kappa = 1.3
    assert green_loop_negative(kappa, 0.0, derivative=True).derivative_in_distance == pytest.approx(-0.5)
    assert green_loop_negative(kappa, TWO_PI, derivative=True).derivative_in_distance == pytest.approx(0.5)


# --- free kernels ------------------------------------------------------------


@pytest.mark.parametrize("kappa,ell", [(0.5, 0.3), (1.0, 1.0), (3.0, 2.0), (50.0, 1.5)])
def test_free_kernels_closed_forms(kappa, ell):
    assert green_free(2, kappa, ell).value == pytest.approx(float(mpmath.besselk(0, kappa * ell)) / TWO_PI, rel=1e-13)
    assert green_free(3, kappa, ell).value == pytest.approx(math.exp(-kappa * ell) / (4 * math.pi * ell), rel=1e-15)


@given(st.integers(2, 3), st.floats(0.1, 10.0), st.floats(0.05, 2.0))
def test_free_kernel_derivative(nu, kappa, ell):
    h = 1e-6
    kv = green_free(nu, kappa, ell, derivative=True)
    fd = (green_free(nu, kappa, ell + h).value - green_free(nu, kappa, ell - h).value) / (2 * h)
    assert kv.derivative_in_distance == pytest.approx(fd, rel=1e-5, abs=1e-12)
    assert kv.derivative_in_distance < 0


def test_free_kernel_rejects_zero_distance_and_bad_nu():
    with pytest.raises(DomainError):
        green_free(3, 1.0, 0.0)
    with pytest.raises(ArgumentError):
        green_free(4, 1.0, 1.0)


def test_xi_regularized_values():
    assert xi_regularized(3, 2.0) == pytest.approx(-2.0 / (4 * math.pi))
    assert xi_regularized(2, 2.0) == pytest.approx(-EULER_GAMMA / TWO_PI)
    # xi is K0(kappa l)/2pi minus its log singularity as l -> 0
    kappa, ell = 1.7, 1e-7
    sing = -math.log(ell) / TWO_PI
    assert green_free(2, kappa, ell).value - sing == pytest.approx(xi_regularized(2, kappa), abs=1e-10)


# --- complete monotonicity ---------------------------------------------------


def test_monotonicity_linear_examples():
    pts = np.linspace(0.1, 4.0, 20)
    assert complete_monotonicity_check(lambda s: 4.0 - s, 1, pts).passed
    rep = complete_monotonicity_check(lambda s: s, 1, pts)
    assert not rep.passed and rep.worst_order == 1


def test_monotonicity_detects_oscillation():
    pts = np.geomspace(0.01, 4.0, 64)
    rep = complete_monotonicity_check(lambda s: np.exp(-s) * (1.2 + np.cos(3 * s)), 4, pts)
    assert not rep.passed


@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
def test_yukawa_of_sqrt_is_completely_monotone(kappa):
    pts = np.geomspace(1e-3, 4.0, 64)
    f = lambda s: np.exp(-kappa * np.sqrt(s)) / (4 * math.pi * np.sqrt(s))
    rep = complete_monotonicity_check(f, 6, pts)
    assert rep.passed and rep.worst_violation < 1e-12


def test_monotonicity_argument_validation():
    with pytest.raises(ArgumentError):
        complete_monotonicity_check(np.exp, 9, np.linspace(0.1, 4, 20))
    with pytest.raises(ArgumentError):
        complete_monotonicity_check(np.exp, 2, [0.5, 0.4, 1.0])
    with pytest.raises(ArgumentError):
        complete_monotonicity_check(np.exp, 2, [0.5, 1.0, 5.0])
