"""Configuration search and theorem-verification campaigns."""

from __future__ import annotations

import functools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .configurations import (
    Configuration,
    Setting,
    SHARP_SIZES,
    canonical_config,
    distance_multiset,
    is_congruent,
    random_config,
    sharp_sphere,
)
from .errors import ArgumentError, NoBoundStateError
from .spectral import SpectralResult, alpha_crit, ground_state

VIOLATION_TOL = 1e-9
CAMPAIGN_CONGRUENCE_TOL = 1e-2
SHARP_CONGRUENCE_TOL = 1e-5


def resolve_workers(workers=None) -> int:
    """Worker count: explicit value, else POINTOPT_WORKERS, else the CPU count."""
    if workers is None:
        env = os.environ.get("POINTOPT_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def parallel_map(fn, items, workers=1):
    """Order-preserving map; results never depend on the worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Reports


@dataclass
class OptimizationReport:
    best_config: Configuration
    best_value: float
    starts: int
    converged_starts: int
    per_start_values: list[float]
    matched_canonical: bool | None
    tolerance_used: float
    objective: str = ""
    per_start_congruent: list[bool] = field(default_factory=list)
    per_start_evaluations: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["best_config"] = self.best_config.to_dict()
        return d

    def csv_rows(self):
        header = ["start", "value", "congruent", "evaluations"]
        rows = [
            [i, v, c if c is not None else "", e]
            for i, (v, c, e) in enumerate(zip(self.per_start_values,
                                               self.per_start_congruent or [None] * self.starts,
                                               self.per_start_evaluations or [""] * self.starts))
        ]
        return header, rows


@dataclass
class VerificationReport:
    setting: str
    alpha: float
    N: int
    trials: int
    seed: int
    canonical_lambda1: float
    canonical_no_bound_state: bool
    violations: int
    sign_violations: int
    min_gap: float | None
    log_min_gap: float | None
    congruent_samples: int
    no_bound_state_samples: int
    tolerance_used: float
    samples: list[dict]

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self):
        header = ["trial", "seed", "lambda1", "energy_offset", "margin", "log_margin",
                  "congruent", "no_bound_state"]
        rows = [[s[h] for h in header] for s in self.samples]
        return header, rows


def _best_index(values, configs, rel=1e-12):
    """Index of the smallest value; ties broken by the sorted distance multiset."""
    values = np.asarray(values, dtype=float)
    best = float(np.min(values))
    tied = [i for i, v in enumerate(values)
            if v <= best + rel * max(1.0, abs(best)) and configs[i] is not None]
    return min(tied, key=lambda i: tuple(np.round(distance_multiset(configs[i]), 12)))


# ---------------------------------------------------------------------------
# Surface energy on the sphere


@dataclass(frozen=True)
class SurfaceEnergy:
    kappa: float
    value: float


def _energy_and_grad(points, kappa):
    """Ordered-pair sum of exp(-kappa l)/(4 pi l) and its Euclidean gradient."""
    n = len(points)
    diff = points[:, None, :] - points[None, :, :]
    ell = np.sqrt((diff**2).sum(-1)) + np.eye(n)
    g, dg = kernels._free(3, kappa, ell, derivative=True)
    off = ~np.eye(n, dtype=bool)
    energy = float(g[off].sum())
    coef = np.where(off, dg / ell, 0.0)
    grad = 2.0 * (coef[:, :, None] * diff).sum(axis=1)
    return energy, grad


def surface_energy(config, kappa: float) -> SurfaceEnergy:
    """Sum of the nu = 3 kernel over ordered pairs of distinct sphere sites."""
    kernels._check_positive("kappa", kappa)
    pts = config.sites if isinstance(config, Configuration) else np.asarray(config, float)
    return SurfaceEnergy(float(kappa), _energy_and_grad(pts, kappa)[0])


def _projected_gradient(points, kappa, max_iter=3000, gtol=1e-11):
    """Riemannian gradient descent on (S^2)^N with Barzilai-Borwein steps."""
    x = points / np.linalg.norm(points, axis=1, keepdims=True)
    e, g = _energy_and_grad(x, kappa)
    rg = g - (g * x).sum(1, keepdims=True) * x
    step = 0.1 / max(np.abs(rg).max(), 1e-300)
    for _ in range(max_iter):
        if np.abs(rg).max() < gtol:
            break
        while True:
            trial = x - step * rg
            trial /= np.linalg.norm(trial, axis=1, keepdims=True)
            e_new, g_new = _energy_and_grad(trial, kappa)
            if e_new <= e - 1e-4 * step * (rg * rg).sum() or step < 1e-16:
                break
            step *= 0.5
        rg_new = g_new - (g_new * trial).sum(1, keepdims=True) * trial
        s = (trial - x).ravel()
        y = (rg_new - rg).ravel()
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 0 else step * 2.0
        x, e, rg = trial, e_new, rg_new
    return x


def _polish(points, kappa):
    n = len(points)

    def fun(u):
        u = u.reshape(n, 3)
        r = np.linalg.norm(u, axis=1, keepdims=True)
        y = u / r
        e, g = _energy_and_grad(y, kappa)
        gu = (g - (g * y).sum(1, keepdims=True) * y) / r
        return e, gu.ravel()

    res = minimize(fun, points.ravel(), jac=True, method="L-BFGS-B",
                   options={"ftol": 1e-16, "gtol": 1e-13, "maxiter": 5000})
    u = res.x.reshape(n, 3)
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def _surface_start(args):
    kappa, n, seed = args
    start = random_config(Setting.SPHERE, n, seed)
    x = _polish(_projected_gradient(np.array(start.sites), kappa), kappa)
    e, g = _energy_and_grad(x, kappa)
    rg = g - (g * x).sum(1, keepdims=True) * x
    return Configuration.from_vectors(x, seed), e, float(np.abs(rg).max())


def minimize_surface_energy(kappa: float, N: int, starts: int = 50, seed: int = 0,
                            workers: int = 1, tol: float = SHARP_CONGRUENCE_TOL,
                            gtol: float = 1e-8) -> OptimizationReport:
    """Multistart minimisation of the nu = 3 surface energy on the unit sphere."""
    kernels._check_positive("kappa", kappa)
    if N < 2 or starts < 1:
        raise ArgumentError("need N >= 2 and starts >= 1")
    out = parallel_map(_surface_start, [(kappa, N, seed + i) for i in range(starts)], workers)
    configs = [c for c, _, _ in out]
    values = [e for _, e, _ in out]
    converged = [gn < gtol for _, _, gn in out]
    sharp = sharp_sphere(N)[0] if N in SHARP_SIZES else None
    congruent = [is_congruent(c, sharp, tol) for c in configs] if sharp else []
    best = _best_index(values, configs)
    return OptimizationReport(
        best_config=configs[best],
        best_value=values[best],
        starts=starts,
        converged_starts=int(sum(converged)),
        per_start_values=values,
        matched_canonical=congruent[best] if sharp else None,
        tolerance_used=tol,
        objective="surface_energy",
        per_start_congruent=congruent,
    )


# ---------------------------------------------------------------------------
# Direct maximisation of the ground state


def _gauge_config(setting, params):
    if setting.angular:
        return Configuration.from_angles(setting, np.concatenate([[0.0], params]))
    n = (len(params) + 3) // 2
    theta = np.concatenate([[0.0, params[0]], params[1::2]])
    phi = np.concatenate([[0.0, 0.0], params[2::2]])
    assert len(theta) == n
    pts = np.column_stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    return Configuration.from_vectors(pts)


def _gauge_params(config):
    """Inverse of ``_gauge_config`` after rotating site 1 to the pole and site 2 to phi = 0."""
    if config.setting.angular:
        s = np.mod(config.sites - config.sites[0], 2 * math.pi)
        return s[1:]
    p = np.array(config.sites)
    z = p[0]
    # rotation taking z to the north pole
    axis = np.cross(z, [0.0, 0.0, 1.0])
    sin_a, cos_a = np.linalg.norm(axis), z[2]
    if sin_a < 1e-12:
        rot = np.eye(3) if cos_a > 0 else np.diag([1.0, -1.0, -1.0])
    else:
        k = axis / sin_a
        kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        rot = np.eye(3) + sin_a * kx + (1 - cos_a) * kx @ kx
    p = p @ rot.T
    phi2 = math.atan2(p[1, 1], p[1, 0])
    c, s = math.cos(-phi2), math.sin(-phi2)
    p = p @ np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]]).T
    theta = np.arccos(np.clip(p[:, 2], -1, 1))
    phi = np.arctan2(p[:, 1], p[:, 0])
    params = [theta[1]]
    for t, f in zip(theta[2:], phi[2:]):
        params += [t, f]
    return np.array(params)


def lambda1_objective(setting, alpha, config) -> tuple[float, SpectralResult | None]:
    """Scalar to minimise when maximising lambda1.

    Loop: ``-lambda1``.  Circle/sphere: ``log|lambda1 - E_ref|``, which is
    monotone in lambda1 and keeps full precision for weak interactions.
    """
    try:
        res = ground_state(setting, alpha, config)
    except NoBoundStateError:
        return math.inf, None
    if setting is Setting.LOOP:
        return -res.lambda1, res
    return res.log_abs_offset, res


def _lambda1_start(args):
    setting, alpha, n, seed, max_evals, xatol = args
    dim = n - 1 if setting.angular else 2 * n - 3
    x0 = _gauge_params(random_config(setting, n, seed))
    counter = [0]

    def f(params):
        counter[0] += 1
        try:
            cfg = _gauge_config(setting, params)
        except ArgumentError:
            return math.inf
        return lambda1_objective(setting, alpha, cfg)[0]

    budget = max_evals or 400 * dim
    x, fx = x0, f(x0)
    for _ in range(4):
        res = minimize(f, x, method="Nelder-Mead",
                       options={"xatol": xatol, "fatol": math.inf, "maxfev": budget,
                                "adaptive": dim > 4})
        improved = res.fun < fx - 1e-15 * max(1.0, abs(fx))
        x, fx = res.x, min(fx, res.fun)
        if not improved or counter[0] >= 4 * budget:
            break
    converged = bool(res.success)
    return _gauge_config(setting, x), float(fx), converged, counter[0]


def maximize_lambda1(setting, alpha: float, N: int, starts: int | None = None, seed: int = 0,
                     workers: int = 1, max_evals: int | None = None,
                     tol: float = SHARP_CONGRUENCE_TOL, xatol: float = 1e-8) -> OptimizationReport:
    """Multistart Nelder-Mead over gauge-fixed coordinates; each probe is a full secular solve."""
    setting = Setting(setting)
    if N < 2:
        raise ArgumentError("N must be >= 2")
    if setting is Setting.LOOP and alpha == 0:
        raise ArgumentError("alpha = 0 on the loop is the free operator")
    if setting.nu == 3:
        canonical = canonical_config(setting, N) if (setting is not Setting.SPHERE
                                                      or N in SHARP_SIZES) else None
        if canonical is not None and not alpha < alpha_crit(canonical):
            raise ArgumentError("alpha must lie below the critical coupling of the canonical set")
    if starts is None:
        starts = 50 if setting is Setting.SPHERE else 20
    jobs = [(setting, alpha, N, seed + i, max_evals, xatol) for i in range(starts)]
    out = parallel_map(_lambda1_start, jobs, workers)
    configs = [c for c, _, _, _ in out]
    values = [v for _, v, _, _ in out]
    best = _best_index(values, configs)
    try:
        canonical = canonical_config(setting, N)
    except ArgumentError:
        canonical = None
    congruent = [is_congruent(c, canonical, tol) for c in configs] if canonical else []
    res = ground_state(setting, alpha, configs[best])
    return OptimizationReport(
        best_config=configs[best],
        best_value=res.lambda1,
        starts=starts,
        converged_starts=int(sum(c for _, _, c, _ in out)),
        per_start_values=[ground_state(setting, alpha, c).lambda1 if np.isfinite(v) else -math.inf
                          for c, v in zip(configs, values)],
        matched_canonical=congruent[best] if canonical else None,
        tolerance_used=tol,
        objective="lambda1",
        per_start_congruent=congruent,
        per_start_evaluations=[e for _, _, _, e in out],
    )


# ---------------------------------------------------------------------------
# Verification campaigns


def _log_margin(setting, ref: SpectralResult, res: SpectralResult) -> float:
    """log(lambda1(canonical) - lambda1(Y)), -inf when the margin is not positive."""
    if setting is Setting.LOOP:
        m = ref.energy_offset - res.energy_offset
        return math.log(m) if m > 0 else -math.inf
    # both offsets are <= 0 for nu = 2, 3: compare magnitudes in log space
    ly, lr = res.log_abs_offset, ref.log_abs_offset
    if not ly > lr:
        return -math.inf
    if lr == -math.inf:
        return ly
    return ly + math.log(-math.expm1(lr - ly))


def _bottom_or_ground(setting, alpha, cfg) -> tuple[SpectralResult, bool]:
    """Ground state, or the essential-spectrum bottom 0 when there is no bound state."""
    try:
        return ground_state(setting, alpha, cfg), False
    except NoBoundStateError:
        # only reachable for nu = 3 with alpha >= 0, where the reference energy is 0
        return SpectralResult(0.0, None, 0.0, (0.0, 0.0), 0, "essential-spectrum",
                              setting, float(alpha), cfg.N), True


def _trial_record(setting, alpha, cfg, trial, ref, canonical, tol):
    res, unbound = _bottom_or_ground(setting, alpha, cfg)
    return {
        "trial": trial,
        "seed": cfg.seed,
        "lambda1": res.lambda1,
        "energy_offset": res.energy_offset,
        "margin": float(ref.energy_offset - res.energy_offset),
        "log_margin": _log_margin(setting, ref, res),
        "congruent": is_congruent(cfg, canonical, tol),
        "no_bound_state": unbound,
    }


def _verify_trial(args):
    setting, alpha, n, seed, trial, ref, canonical, tol = args
    return _trial_record(setting, alpha, random_config(setting, n, seed), trial, ref, canonical, tol)


def verify_theorem(setting, alpha: float, N: int, trials: int, seed: int = 0,
                   workers: int = 1, congruence_tol: float = CAMPAIGN_CONGRUENCE_TOL,
                   configs: list[Configuration] | None = None) -> VerificationReport:
    """Compare random configurations against the canonical one.

    A violation is lambda1(Y) > lambda1(canonical) + 1e-9.  ``sign_violations``
    additionally counts non-congruent samples whose margin is not strictly
    positive in exact (log-space) comparison.  An operator without a bound
    state (nu = 3, alpha >= 0) enters with lambda1 = 0, the bottom of its
    essential spectrum, and is flagged.  Explicit ``configs`` replace the
    random draws.
    """
    setting = Setting(setting)
    if trials < 1 and configs is None:
        raise ArgumentError("trials must be >= 1")
    canonical = canonical_config(setting, N)
    ref, canonical_unbound = _bottom_or_ground(setting, alpha, canonical)
    if configs is None:
        jobs = [(setting, alpha, N, seed + i, i, ref, canonical, congruence_tol)
                for i in range(trials)]
        samples = parallel_map(_verify_trial, jobs, workers)
    else:
        samples = [_trial_record(setting, alpha, c, i, ref, canonical, congruence_tol)
                   for i, c in enumerate(configs)]
    violations = sum(1 for s in samples
                     if s["margin"] is not None and -s["margin"] > VIOLATION_TOL)
    # strict inequality is only claimed when both operators have a bound state
    strict = [s for s in samples if not (s["congruent"] or s["no_bound_state"] or canonical_unbound)]
    sign_violations = sum(1 for s in strict if s["log_margin"] == -math.inf)
    min_gap = min((s["margin"] for s in strict), default=None)
    log_min_gap = min((s["log_margin"] for s in strict), default=None)
    return VerificationReport(
        setting=setting.value,
        alpha=float(alpha),
        N=N,
        trials=len(samples),
        seed=seed,
        canonical_lambda1=ref.lambda1,
        canonical_no_bound_state=canonical_unbound,
        violations=violations,
        sign_violations=sign_violations,
        min_gap=min_gap,
        log_min_gap=log_min_gap,
        congruent_samples=sum(1 for s in samples if s["congruent"]),
        no_bound_state_samples=sum(1 for s in samples if s["no_bound_state"]),
        tolerance_used=congruence_tol,
        samples=samples,
    )


def conjecture_scan(N: int, alpha_grid, trials: int, seed: int = 0, workers: int = 1,
                    congruence_tol: float = CAMPAIGN_CONGRUENCE_TOL) -> list[dict]:
    """Repulsive-loop campaign over a grid of couplings; one row per alpha.

    ``weak_prediction`` is alpha**2 times the second-order coefficient gap of
    the sample attaining ``min_gap``; it approximates ``min_gap`` as alpha -> 0.
    """
    from .asymptotics import c2_closed

    rows = []
    c2_ref = c2_closed(canonical_config(Setting.LOOP, N))
    for alpha in alpha_grid:
        if not alpha > 0:
            raise ArgumentError("conjecture scan needs alpha > 0")
        rep = verify_theorem(Setting.LOOP, alpha, N, trials, seed, workers, congruence_tol)
        strict = [s for s in rep.samples if not s["congruent"]]
        prediction = None
        if strict:
            worst = min(strict, key=lambda s: s["margin"])
            cfg = random_config(Setting.LOOP, N, worst["seed"])
            prediction = alpha**2 * (c2_ref - c2_closed(cfg))
        rows.append({
            "alpha": float(alpha),
            "trials": rep.trials,
            "violations": rep.violations,
            "sign_violations": rep.sign_violations,
            "min_gap": rep.min_gap,
            "weak_prediction": prediction,
        })
    return rows
