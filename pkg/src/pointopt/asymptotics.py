"""Weak- and strong-coupling behaviour of the repulsive loop."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import polygamma

from .configurations import Configuration, Setting, canonical_loop
from .errors import ArgumentError
from .spectral import dirichlet_ground, ground_state

TWO_PI = 2.0 * math.pi
_CHUNK = 1 << 15


def _loop_angles(config) -> np.ndarray:
    if isinstance(config, Configuration):
        if not config.setting.angular:
            raise ArgumentError("loop configuration required")
        return np.asarray(config.sites, dtype=float)
    return np.atleast_1d(np.asarray(config, dtype=float))


def bernoulli_b2(x):
    """Second Bernoulli polynomial x**2 - x + 1/6."""
    x = np.asarray(x, dtype=float)
    return x * x - x + 1.0 / 6.0


def cosine_series(theta, M: int, method: str = "partial"):
    """Truncation of sum_{m >= 1} cos(m theta) / m**2.

    ``method="cesaro"`` applies Fejer weights (1 - m/(M+1)).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros_like(theta)
    for start in range(1, M + 1, _CHUNK):
        m = np.arange(start, min(start + _CHUNK, M + 1), dtype=float)
        w = 1.0 / (m * m)
        if method == "cesaro":
            w = w * (1.0 - m / (M + 1.0))
        elif method != "partial":
            raise ArgumentError(f"unknown method {method!r}")
        out += np.cos(np.outer(theta, m)) @ w
    return out


def bernoulli_identity_error(M: int = 100_000, grid=None, method: str = "partial") -> float:
    """Max deviation of ``cosine_series`` from pi**2 B2(theta / 2 pi) on a grid in [0, 2 pi]."""
    if grid is None:
        grid = np.linspace(0.0, TWO_PI, 65)
    grid = np.asarray(grid, dtype=float)
    exact = math.pi**2 * bernoulli_b2(np.mod(grid, TWO_PI) / TWO_PI)
    return float(np.max(np.abs(cosine_series(grid, M, method) - exact)))


def c2_tail_bound(N: int, m_max: int) -> float:
    """Bound N**2 / (2 pi**2 m_max) on the dropped terms of the plain partial sum."""
    return N * N / (2.0 * math.pi**2 * m_max)


def _offdiag_tail_bound(y, m_max):
    # |sum_{m > M} cos(m t) / m^2| <= 1 / (M^2 |sin(t/2)|) by Abel summation, and <= 1/M always
    d = np.mod(y[:, None] - y[None, :], TWO_PI)
    s = np.abs(np.sin(d / 2.0))[~np.eye(len(y), dtype=bool)]
    per_pair = np.minimum(1.0 / m_max, 1.0 / (m_max**2 * np.maximum(s, 1e-300)))
    return float(per_pair.sum() / (2.0 * math.pi**2))


@dataclass(frozen=True)
class C2Series:
    value: float
    tail_bound: float
    m_max: int
    tail: str

    def __float__(self) -> float:
        return self.value


def c2_series(config, m_max: int = 1_000_000, tail: str = "diagonal", with_bound: bool = False):
    """Second-order coefficient from the Fourier series.

    -(1 / 2 pi**2) sum_{m=1}^{m_max} |sum_j exp(i m y_j)|**2 / m**2.

    ``tail="diagonal"`` adds the exact remainder of the j = j' part,
    N * sum_{m > m_max} 1/m**2, leaving only an oscillating remainder of
    order 1/m_max**2.  ``tail="none"`` is the plain partial sum, whose
    remainder is bounded by ``c2_tail_bound``.
    """
    if m_max < 100:
        raise ArgumentError("m_max must be >= 100")
    y = _loop_angles(config)
    n = len(y)
    parts = []
    for start in range(m_max, 0, -_CHUNK):
        m = np.arange(max(1, start - _CHUNK + 1), start + 1, dtype=float)
        s = np.exp(1j * np.outer(m, y)).sum(axis=1)
        parts.append(float(np.sum((s.real**2 + s.imag**2) / (m * m))))
    total = math.fsum(parts)
    if tail == "diagonal":
        total += n * float(polygamma(1, m_max + 1))
        bound = _offdiag_tail_bound(y, m_max)
    elif tail == "none":
        bound = c2_tail_bound(n, m_max)
    else:
        raise ArgumentError(f"unknown tail mode {tail!r}")
    value = -total / (2.0 * math.pi**2)
    return C2Series(value, bound, m_max, tail) if with_bound else value


def c2_closed(config) -> float:
    """Second-order coefficient via -(1/2) sum_{j,j'} B2(((y_j - y_j') mod 2 pi) / 2 pi)."""
    y = _loop_angles(config)
    x = np.mod(y[:, None] - y[None, :], TWO_PI) / TWO_PI
    x = np.where(x >= 1.0, 0.0, x)
    return -0.5 * math.fsum(bernoulli_b2(x).ravel())


def c1_exact(N: int) -> float:
    return N / TWO_PI


def pair_square_sum(config) -> float:
    """Sum over ordered pairs of squared angle differences."""
    y = _loop_angles(config)
    return math.fsum(((y[:, None] - y[None, :]) ** 2).ravel())


def canonical_pair_square_sum(N: int) -> float:
    """Closed form (2/3) pi**2 (N**2 - 1) for the equidistant set pi (2j - 1) / N."""
    return 2.0 / 3.0 * math.pi**2 * (N * N - 1)


# ---------------------------------------------------------------------------
# Checks against the full solver


@dataclass
class WeakExpansion:
    c1: float
    c2_series: float
    c2_closed: float
    terms_used: int


@dataclass
class WeakCheckReport:
    expansion: WeakExpansion
    c1_fit: float
    exponent: float
    constant: float
    rows: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self):
        header = ["alpha", "lambda1", "model_value", "residual"]
        return header, [[r[h] for h in header] for r in self.rows]


def weak_expansion(config, m_max: int = 1_000_000) -> WeakExpansion:
    y = _loop_angles(config)
    return WeakExpansion(c1_exact(len(y)), c2_series(config, m_max), c2_closed(config), m_max)


def weak_expansion_check(config: Configuration, alpha_grid, m_max: int = 1_000_000) -> WeakCheckReport:
    """Compare the solver with c1 alpha + c2 alpha**2 and fit the residual's power law."""
    alphas = np.asarray(sorted(alpha_grid), dtype=float)
    if len(alphas) < 4:
        raise ArgumentError("weak-coupling fit needs at least 4 grid points")
    if np.any(alphas <= 0) or np.any(alphas > 0.2):
        raise ArgumentError("weak-coupling alphas must lie in (0, 0.2]")
    exp = weak_expansion(config, m_max)
    lam = np.array([ground_state(Setting.LOOP, a, config).lambda1 for a in alphas])
    c1_fit = float(np.polyfit(alphas, lam / alphas, 1)[1])
    model = exp.c1 * alphas + exp.c2_closed * alphas**2
    resid = lam - model
    mask = np.abs(resid) > 0
    if mask.sum() >= 2:
        slope, icept = np.polyfit(np.log(alphas[mask]), np.log(np.abs(resid[mask])), 1)
    else:
        slope, icept = math.inf, -math.inf
    rows = [{"alpha": float(a), "lambda1": float(v), "model_value": float(m), "residual": float(r)}
            for a, v, m, r in zip(alphas, lam, model, resid)]
    return WeakCheckReport(exp, c1_fit, float(slope), float(math.exp(icept)), rows)


@dataclass
class StrongCheckReport:
    dirichlet: float
    monotone: bool
    below_dirichlet: bool
    c_estimate: float | None
    rows: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self):
        header = ["alpha", "lambda1", "model_value", "residual"]
        return header, [[r[h] for h in header] for r in self.rows]


def richardson_c(values_by_alpha: dict[float, float]) -> float:
    """Extrapolate alpha * (lambda_D - lambda1) to alpha -> inf assuming c + d/alpha + e/alpha**2."""
    a = np.array(sorted(values_by_alpha))
    f = np.array([values_by_alpha[x] for x in a])
    if len(a) == 1:
        return float(f[0])
    # polynomial in 1/alpha evaluated at 0
    deg = min(len(a) - 1, 2)
    coeffs = np.polyfit(1.0 / a[-(deg + 1):], f[-(deg + 1):], deg)
    return float(coeffs[-1])


def strong_limit_check(config: Configuration, alpha_grid=(1e2, 1e3, 1e4)) -> StrongCheckReport:
    """Monotone approach to the Dirichlet value from below and the 1/alpha coefficient."""
    alphas = np.asarray(sorted(alpha_grid), dtype=float)
    if len(alphas) == 0 or np.any(alphas < 10):
        raise ArgumentError("strong-coupling alphas must be >= 10")
    lam_d = dirichlet_ground(config)
    lam = np.array([ground_state(Setting.LOOP, a, config).lambda1 for a in alphas])
    scaled = alphas * (lam_d - lam)
    rows = [{"alpha": float(a), "lambda1": float(v), "model_value": lam_d,
             "residual": float(v - lam_d)} for a, v in zip(alphas, lam)]
    return StrongCheckReport(
        dirichlet=lam_d,
        monotone=bool(np.all(np.diff(lam) > 0)),
        below_dirichlet=bool(np.all(lam < lam_d)),
        c_estimate=richardson_c(dict(zip(alphas.tolist(), scaled.tolist()))),
        rows=rows,
    )


def c2_maximality(N: int, trials: int, seed: int = 0, congruence_tol: float = 1e-2) -> dict:
    """Count random Y with c2(Y) > c2(canonical), and the smallest strict gap."""
    from .configurations import is_congruent, random_config

    ref = canonical_loop(N)
    c_ref = c2_closed(ref)
    violations, gaps = 0, []
    for i in range(trials):
        y = random_config(Setting.LOOP, N, seed + i)
        gap = c_ref - c2_closed(y)
        if gap < -1e-12:
            violations += 1
        if not is_congruent(y, ref, congruence_tol):
            gaps.append(gap)
    return {"N": N, "trials": trials, "violations": violations,
            "min_gap": min(gaps) if gaps else None}
