"""Green's-function kernels for point interactions on a loop, a circle and a sphere.

All kernels use the unit scaling of the package: the loop has perimeter 2*pi,
circles and the sphere have unit radius.  The vectorised ``_``-prefixed helpers
are what the secular-matrix assembly calls; the public wrappers validate their
arguments and return a :class:`KernelValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286061
TWO_PI = 2.0 * math.pi
POLE_GUARD = 1e-8

# Series / quadrature split for K0 and K1.
_SERIES_MAX_X = 2.0
_SERIES_TERMS = 30
_QUAD_STEP = 0.1
_QUAD_UMAX = 7.0


@dataclass(frozen=True)
class KernelValue:
    value: float | np.ndarray
    derivative_in_distance: float | np.ndarray | None = None


def _check_positive(name, x):
    if not np.all(np.isfinite(x)) or np.any(np.asarray(x) <= 0):
        raise DomainError(f"{name} must be finite and positive, got {x!r}")


# ---------------------------------------------------------------------------
# Modified Bessel functions of the second kind, orders 0 and 1


def _series_k0_k1(x):
    """Ascending series for K0 and K1, accurate for 0 < x <= 2."""
    q = 0.25 * x * x
    lg = np.log(0.5 * x)
    i0 = np.zeros_like(x)
    i1 = np.zeros_like(x)
    s0 = np.zeros_like(x)
    s1 = np.zeros_like(x)
    term0 = np.ones_like(x)  # q^k / (k!)^2
    term1 = np.ones_like(x)  # q^k / (k! (k+1)!)
    psi_k = -EULER_GAMMA  # psi(k+1)
    for k in range(_SERIES_TERMS):
        psi_k1 = psi_k + 1.0 / (k + 1)  # psi(k+2)
        i0 += term0
        i1 += term1
        s0 += psi_k * term0
        s1 += (psi_k + psi_k1) * term1
        term0 = term0 * q / ((k + 1) * (k + 1))
        term1 = term1 * q / ((k + 1) * (k + 2))
        psi_k = psi_k1
    k0 = -lg * i0 + s0
    half = 0.5 * x
    k1 = 1.0 / x + lg * half * i1 - 0.5 * half * s1
    return k0, k1


def _quad_k0e_k1e(x):
    """exp(x)*K0(x) and exp(x)*K1(x) from the integral of exp(-x(cosh t - 1)).

    The substitution t = c*u with c = min(1, sqrt(2/x)) keeps the trapezoid
    rule's strip of analyticity wide for every x, so one fixed u-grid gives
    full double precision for x >= 2.
    """
    u = np.arange(0.0, _QUAD_UMAX + 0.5 * _QUAD_STEP, _QUAD_STEP)
    w = np.full(u.shape, _QUAD_STEP)
    w[0] *= 0.5
    c = np.minimum(1.0, np.sqrt(2.0 / x))
    t = np.multiply.outer(c, u)
    xe = x[:, None]
    base = np.exp(-xe * (2.0 * np.sinh(0.5 * t) ** 2)) * w
    k0e = c * base.sum(axis=1)
    k1e = c * (base * np.cosh(t)).sum(axis=1)
    return k0e, k1e


def _bessel_k01(x):
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    k0 = np.empty_like(flat)
    k1 = np.empty_like(flat)
    small = flat <= _SERIES_MAX_X
    if small.any():
        k0[small], k1[small] = _series_k0_k1(flat[small])
    big = ~small
    if big.any():
        xb = flat[big]
        k0e, k1e = _quad_k0e_k1e(xb)
        scale = np.exp(-xb)
        k0[big] = k0e * scale
        k1[big] = k1e * scale
    return k0.reshape(x.shape), k1.reshape(x.shape)


def _bessel_k0e(x):
    """exp(x) * K0(x), free of underflow for large x."""
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    out = np.empty_like(flat)
    small = flat <= _SERIES_MAX_X
    if small.any():
        out[small] = _series_k0_k1(flat[small])[0] * np.exp(flat[small])
    if (~small).any():
        out[~small] = _quad_k0e_k1e(flat[~small])[0]
    return out.reshape(x.shape)


def _free_scaled(nu, kappa, ell, ell_ref):
    """exp(kappa * ell_ref) times the free kernel, for ell >= ell_ref."""
    ell = np.asarray(ell, dtype=float)
    damp = np.exp(-kappa * (ell - ell_ref))
    if nu == 2:
        return _bessel_k0e(kappa * ell) * damp / TWO_PI
    return damp / (4.0 * math.pi * ell)


def bessel_k0(x, *, with_flag=False):
    """Modified Bessel function K0 for x > 0 (scalars or arrays).

    Power series with the logarithmic term for x <= 2, an exp(-x)-scaled
    trapezoid quadrature above.  With ``with_flag=True`` returns
    ``(value, underflow)`` where ``underflow`` marks results flushed to zero
    or into the subnormal range.
    """
    _check_positive("x", x)
    k0, _ = _bessel_k01(x)
    if np.ndim(x) == 0:
        k0 = float(k0)
    if with_flag:
        underflow = np.abs(k0) < np.finfo(float).tiny
        return k0, (bool(underflow) if np.ndim(x) == 0 else underflow)
    return k0


def bessel_k1(x):
    """Modified Bessel function K1 for x > 0; K0' = -K1."""
    _check_positive("x", x)
    _, k1 = _bessel_k01(x)
    return float(k1) if np.ndim(x) == 0 else k1


# ---------------------------------------------------------------------------
# Loop kernels (perimeter 2*pi)


def _fold(d):
    """Geodesic reduction d -> min(d, 2*pi - d) and the sign of d(d')/dd."""
    d = np.asarray(d, dtype=float)
    folded = np.where(d <= math.pi, d, TWO_PI - d)
    sign = np.where(d <= math.pi, 1.0, -1.0)
    return folded, sign


def _loop_negative(kappa, d, derivative=False):
    # cosh(kappa(pi - d))/(2 kappa sinh(pi kappa)) in overflow-free form
    dp, sign = _fold(d)
    a = np.exp(-kappa * dp)
    b = np.exp(-kappa * (TWO_PI - dp))
    den = -np.expm1(-TWO_PI * kappa)
    value = (a + b) / (2.0 * kappa * den)
    if not derivative:
        return value
    return value, -sign * (a - b) / (2.0 * den)


def _loop_positive(k, d, derivative=False):
    dp, sign = _fold(d)
    s = math.sin(math.pi * k)
    value = -np.cos(k * (math.pi - dp)) / (2.0 * k * s)
    if not derivative:
        return value
    return value, -sign * np.sin(k * (math.pi - dp)) / (2.0 * s)


def _check_loop_distance(d):
    d = np.asarray(d, dtype=float)
    if not np.all(np.isfinite(d)) or np.any(d < 0) or np.any(d > TWO_PI):
        raise DomainError("loop distance must lie in [0, 2*pi]; reduce mod 2*pi first")


def near_pole(k, guard=POLE_GUARD):
    """True when k is within ``guard`` of a positive integer."""
    m = round(k)
    return m >= 1 and abs(k - m) <= guard


def green_loop_negative(kappa, d, derivative=False):
    """Free loop resolvent kernel at energy -kappa**2."""
    _check_positive("kappa", kappa)
    _check_loop_distance(d)
    out = _loop_negative(float(kappa), d, derivative)
    if derivative:
        return KernelValue(_unwrap(out[0]), _unwrap(out[1]))
    return KernelValue(_unwrap(out))


def green_loop_positive(k, d, derivative=False, pole_guard=POLE_GUARD):
    """Free loop resolvent kernel at energy k**2 (poles at integer k)."""
    _check_positive("k", k)
    if near_pole(float(k), pole_guard):
        raise PoleError(f"k={k!r} lies within {pole_guard:g} of the pole at {round(k)}")
    _check_loop_distance(d)
    out = _loop_positive(float(k), d, derivative)
    if derivative:
        return KernelValue(_unwrap(out[0]), _unwrap(out[1]))
    return KernelValue(_unwrap(out))


# ---------------------------------------------------------------------------
# Free-space kernels in R^2 and R^3


def _free(nu, kappa, ell, derivative=False):
    ell = np.asarray(ell, dtype=float)
    if nu == 2:
        k0, k1 = _bessel_k01(kappa * ell)
        value = k0 / TWO_PI
        deriv = -kappa * k1 / TWO_PI
    elif nu == 3:
        e = np.exp(-kappa * ell)
        value = e / (4.0 * math.pi * ell)
        deriv = -e * (kappa * ell + 1.0) / (4.0 * math.pi * ell * ell)
    else:
        raise ArgumentError(f"nu must be 2 or 3, got {nu!r}")
    return (value, deriv) if derivative else value


def _free_dkappa(nu, kappa, ell):
    """Derivative of the free kernel with respect to kappa."""
    ell = np.asarray(ell, dtype=float)
    if nu == 2:
        _, k1 = _bessel_k01(kappa * ell)
        return -ell * k1 / TWO_PI
    return -np.exp(-kappa * ell) / (4.0 * math.pi)


def green_free(nu, kappa, ell, derivative=False):
    """Free resolvent kernel of -Laplacian in R^nu at energy -kappa**2."""
    if nu not in (2, 3):
        raise ArgumentError(f"nu must be 2 or 3, got {nu!r}")
    _check_positive("kappa", kappa)
    ell_arr = np.asarray(ell, dtype=float)
    if not np.all(np.isfinite(ell_arr)) or np.any(ell_arr <= 0):
        raise DomainError("chordal distance must be positive; the diagonal uses xi_regularized")
    out = _free(nu, float(kappa), ell_arr, derivative)
    if derivative:
        return KernelValue(_unwrap(out[0]), _unwrap(out[1]))
    return KernelValue(_unwrap(out))


def xi_regularized(nu, kappa):
    """Regularised value of the free kernel at the interaction site."""
    _check_positive("kappa", kappa)
    if nu == 2:
        return -(math.log(kappa / 2.0) + EULER_GAMMA) / TWO_PI
    if nu == 3:
        return -kappa / (4.0 * math.pi)
    raise ArgumentError(f"nu must be 2 or 3, got {nu!r}")


def _unwrap(v):
    return float(v) if np.ndim(v) == 0 else v


# ---------------------------------------------------------------------------
# Complete monotonicity certificate


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    worst_violation: float
    worst_order: int | None


def complete_monotonicity_check(
    f: Callable[[np.ndarray], np.ndarray],
    order: int,
    sample_points: Sequence[float],
    tol: float = 1e-12,
) -> MonotonicityReport:
    """Finite-order complete monotonicity test by alternating divided differences.

    For n = 0..order and every window of n+1 consecutive sample points, the
    n-th divided difference is multiplied by (window width)**n and divided by
    the largest |f| on the window; ``(-1)**n`` times that number must not drop
    below ``-tol``.  A pass is a finite-order certificate, not a proof.
    """
    x = np.asarray(sample_points, dtype=float)
    if order < 0 or order > 8:
        raise ArgumentError("order must lie in 0..8")
    if x.ndim != 1 or x.size < order + 1:
        raise ArgumentError(f"need at least order+1={order + 1} sample points")
    if np.any(np.diff(x) <= 0) or x[0] <= 0 or x[-1] > 4.0:
        raise ArgumentError("sample points must be strictly increasing inside (0, 4]")

    fx = np.asarray(f(x), dtype=float)
    worst = 0.0
    worst_order = None
    table = fx.copy()
    for n in range(order + 1):
        if n > 0:
            table = (table[1:] - table[:-1]) / (x[n:] - x[:-n])
        width = x[n:] - x[: x.size - n]
        windows = np.lib.stride_tricks.sliding_window_view(np.abs(fx), n + 1)
        scale = np.maximum(windows.max(axis=1), np.finfo(float).tiny)
        normalised = (-1) ** n * table * width**n / scale
        violation = float(max(0.0, -normalised.min()))
        if violation > worst:
            worst, worst_order = violation, n
    return MonotonicityReport(worst <= tol, worst, worst_order)
