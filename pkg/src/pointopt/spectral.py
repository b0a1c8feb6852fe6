"""Secular matrices and ground-state solvers.

Two independent routes exist for the loop: the Krein secular matrix and the
2x2 transfer-matrix (monodromy) of the periodic problem.  For the circle and
the sphere only the Krein route is available.

For nu = 2, 3 the diagonal of the secular matrix is a scalar, so its smallest
eigenvalue is ``diag - lambda_max(G_off)``.  The solver works in a shift
variable relative to the single-point root ``kappa0`` (``kappa = kappa0 + t``
for nu = 3, ``kappa = kappa0 * exp(s)`` for nu = 2), which keeps the
configuration dependence of the energy at full relative precision even when
the off-diagonal kernel is exponentially small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .configurations import Configuration, Setting, consecutive_gaps, distances
from .errors import ArgumentError, NoBoundStateError, SolverError

EPS = np.finfo(float).eps
KAPPA_MIN = 1e-12
RESIDUAL_TOL = 1e-10
WEAK_SERIES_ALPHA = 1e-6


@dataclass(frozen=True)
class SpectralParam:
    kind: str  # "kappa" (E = -value**2) or "k" (E = value**2)
    value: float

    def __post_init__(self):
        if self.kind not in ("kappa", "k"):
            raise ArgumentError(f"unknown spectral parameter kind {self.kind!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise ArgumentError("spectral parameter must be finite and positive")

    @property
    def energy(self) -> float:
        return -self.value**2 if self.kind == "kappa" else self.value**2

    @classmethod
    def from_energy(cls, energy: float) -> "SpectralParam":
        if energy < 0:
            return cls("kappa", math.sqrt(-energy))
        return cls("k", math.sqrt(energy))


@dataclass(frozen=True)
class KreinMatrix:
    entries: np.ndarray
    setting: Setting
    alpha: float
    param: SpectralParam


@dataclass
class SpectralResult:
    """Ground state of one (setting, alpha, configuration) triple.

    ``energy_offset`` is ``lambda1 - reference_energy`` computed without
    cancellation; compare configurations through it, never through
    ``lambda1`` alone.
    """

    lambda1: float
    param_at_root: SpectralParam | None
    residual: float
    bracket: tuple[float, float]
    evaluations: int
    method: str
    setting: Setting
    alpha: float
    N: int
    reference_energy: float = 0.0
    energy_offset: float | None = None
    log_abs_offset: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.energy_offset is None:
            self.energy_offset = self.lambda1 - self.reference_energy
        if self.log_abs_offset is None:
            off = abs(self.energy_offset)
            self.log_abs_offset = math.log(off) if off > 0 else -math.inf

    def to_dict(self) -> dict:
        return {
            "setting": self.setting.value,
            "alpha": self.alpha,
            "N": self.N,
            "lambda1": self.lambda1,
            "param": None if self.param_at_root is None else {
                "kind": self.param_at_root.kind, "value": self.param_at_root.value},
            "residual": self.residual,
            "method": self.method,
            "evaluations": self.evaluations,
            "reference_energy": self.reference_energy,
            "energy_offset": self.energy_offset,
            "log_abs_offset": self.log_abs_offset,
            "bracket": list(self.bracket),
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class Monodromy:
    matrix: np.ndarray
    energy: float
    trace: float | None = None

    @property
    def discriminant(self) -> float:
        return float(np.trace(self.matrix)) if self.trace is None else self.trace


# ---------------------------------------------------------------------------
# Symmetric eigenproblems


def _check_symmetric(a, rtol=1e-10):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError("matrix must be square")
    scale = max(np.abs(a).max(initial=0.0), np.finfo(float).tiny)
    if np.abs(a - a.T).max(initial=0.0) > rtol * scale:
        raise ArgumentError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def jacobi_eigh(a, max_sweeps: int = 100):
    """All eigenpairs of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors
    as columns.
    """
    a = _check_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0 or n == 1:
        return np.diag(a).copy(), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= EPS * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise SolverError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def min_eigenvalue_sym(matrix, method: str = "jacobi"):
    """Smallest eigenvalue and a unit eigenvector of a real symmetric matrix."""
    a = _check_symmetric(matrix)
    if a.shape[0] > 4096:
        raise ArgumentError("matrix too large")
    if method == "jacobi":
        w, v = jacobi_eigh(a)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ArgumentError(f"unknown method {method!r}")
    return float(w[0]), v[:, 0]


# ---------------------------------------------------------------------------
# Secular matrices


def _kernel_matrix(setting, config_dist, param):
    """Free-kernel matrix; for nu = 2, 3 the diagonal is left at zero."""
    if setting is Setting.LOOP:
        d = config_dist.geodesic
        if param.kind == "kappa":
            return kernels._loop_negative(param.value, d)
        return kernels._loop_positive(param.value, d)
    ell = config_dist.chordal
    n = ell.shape[0]
    safe = ell + np.eye(n)
    g = kernels._free(setting.nu, param.value, safe)
    np.fill_diagonal(g, 0.0)
    return g


def krein_matrix(setting, alpha: float, config: Configuration, param: SpectralParam) -> KreinMatrix:
    """Secular matrix whose singularity in the spectral parameter marks eigenvalues.

    Loop: ``-I/alpha - G`` with ``G`` the full loop kernel (diagonal G(0)).
    Circle/sphere: ``(alpha - xi) I - G_off``.
    """
    setting = Setting(setting)
    if config.setting is not setting:
        raise ArgumentError("configuration setting does not match")
    if setting is Setting.LOOP:
        if alpha == 0:
            raise ArgumentError("alpha = 0 is the free loop; no secular matrix")
        if param.kind == "k" and kernels.near_pole(param.value):
            raise kernels.PoleError(f"k={param.value!r} is within the pole guard of an integer")
        g = _kernel_matrix(setting, distances(config), param)
        m = -np.eye(config.N) / alpha - g
    else:
        if param.kind != "kappa":
            raise ArgumentError("circle and sphere settings use kappa > 0")
        g = _kernel_matrix(setting, distances(config), param)
        m = (alpha - kernels.xi_regularized(setting.nu, param.value)) * np.eye(config.N) - g
    return KreinMatrix(0.5 * (m + m.T), setting, float(alpha), param)


def reference_kappa(setting, alpha: float) -> float:
    """Root of the scalar (single-point) secular equation, used as the shift origin.

    For nu = 3 this is ``-4 pi alpha`` and may be non-positive (no
    single-point bound state); it still serves as an algebraic origin.
    """
    setting = Setting(setting)
    if setting.nu == 3:
        return -4.0 * math.pi * alpha
    if setting.nu == 2:
        return 2.0 * math.exp(-kernels.EULER_GAMMA - 2.0 * math.pi * alpha)
    raise ArgumentError("reference_kappa is defined for nu = 2, 3")


def reference_energy(setting, alpha: float) -> float:
    setting = Setting(setting)
    if setting is Setting.LOOP:
        return 0.0
    k0 = reference_kappa(setting, alpha)
    return -k0 * k0 if k0 > KAPPA_MIN else 0.0


# ---------------------------------------------------------------------------
# Negative-energy ground states


def _solve_loop_negative(alpha, config, dist, kappa_min):
    n = config.N
    evals = 0

    def mu(kappa):
        nonlocal evals
        evals += 1
        g = kernels._loop_negative(kappa, dist.geodesic)
        return float(np.linalg.eigvalsh(-np.eye(n) / alpha - g)[0])

    hi = max(1.0, 0.5 * n * abs(alpha))
    while mu(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise SolverError("could not bracket the loop ground state from above")
    lo = 0.5 * hi
    while mu(lo) >= 0.0:
        lo *= 0.5
        if lo < kappa_min:
            raise NoBoundStateError("no sign change of the smallest eigenvalue", (kappa_min, hi))
    root = brentq(mu, lo, hi, xtol=1e-300, rtol=4 * EPS, maxiter=500)
    res = abs(mu(root))
    return SpectralResult(
        lambda1=-root * root,
        param_at_root=SpectralParam("kappa", root),
        residual=res,
        bracket=(lo, hi),
        evaluations=evals,
        method="krein",
        setting=Setting.LOOP,
        alpha=float(alpha),
        N=n,
    )


def _solve_free_negative(setting, alpha, config, dist, kappa_min):
    """Secular equation for nu = 2, 3 in the shift variable.

    ``lambda_max(G_off)`` is carried as ``exp(-kappa * ell_min) * lam_tilde``
    so the logarithm of the shift stays exact when the shift itself would
    underflow.
    """
    nu = setting.nu
    n = config.N
    k0 = reference_kappa(setting, alpha)
    ell = dist.chordal + np.eye(n)
    ell_min = float(ell[~np.eye(n, dtype=bool)].min()) if n > 1 else 0.0
    # diagonal is discarded; pin it to ell_min so the scaled kernel cannot overflow
    np.fill_diagonal(ell, max(ell_min, 1.0))
    evals = 0

    if nu == 3:
        def kappa_of(v):
            return k0 + v
        diag_scale = 4.0 * math.pi
    else:
        def kappa_of(v):
            return k0 * math.exp(v)
        diag_scale = 2.0 * math.pi

    def log_lam_max(kappa):
        nonlocal evals
        evals += 1
        if n == 1:
            return -math.inf
        g = kernels._free_scaled(nu, kappa, ell, ell_min)
        np.fill_diagonal(g, 0.0)
        return -kappa * ell_min + math.log(float(np.linalg.eigvalsh(g)[-1]))

    def lam_max(kappa):
        return math.exp(log_lam_max(kappa))

    def mu(v):
        return v / diag_scale - lam_max(kappa_of(v))

    if k0 <= kappa_min:
        lo = kappa_min - k0 if nu == 3 else math.log(kappa_min / k0)
        if mu(lo) >= 0.0:
            raise NoBoundStateError(
                f"alpha={alpha} is not below the critical coupling of this configuration",
                (kappa_min, math.inf),
            )
        hi = diag_scale * lam_max(kappa_min)
    else:
        lo = 0.0
        hi = diag_scale * lam_max(k0)
    if hi <= lo:
        root = lo
    else:
        f_hi = mu(hi)
        if f_hi < 0.0 and f_hi > -64.0 * EPS * hi / diag_scale:
            # the shift is below the resolution of kappa: hi is the root to rounding
            f_hi = 0.0
        if f_hi < 0.0:
            raise SolverError("upper bracket failed for the shifted secular equation")
        root = hi if f_hi == 0.0 else brentq(mu, lo, hi, xtol=1e-300, rtol=4 * EPS, maxiter=500)
    kappa = kappa_of(root)
    res = abs(mu(root))

    # log|energy offset| without underflow
    if k0 > kappa_min and kappa == k0:
        log_root = math.log(diag_scale) + log_lam_max(k0)
    else:
        log_root = math.log(root) if root > 0 else -math.inf
    if nu == 3 and k0 > kappa_min:
        offset = -root * (2.0 * k0 + root)
        log_offset = log_root + math.log(2.0 * k0 + root)
    elif nu == 3:
        offset = -kappa * kappa
        log_offset = 2.0 * math.log(kappa)
    else:
        offset = -k0 * k0 * math.expm1(2.0 * root)
        if root > 1e-6:
            log_offset = 2.0 * math.log(k0) + math.log(math.expm1(2.0 * root))
        else:
            log_offset = 2.0 * math.log(k0) + math.log(2.0) + log_root + math.log1p(root)
    if k0 > kappa_min or nu == 2:
        ref = -k0 * k0
    else:
        ref = 0.0
    return SpectralResult(
        lambda1=-kappa * kappa,
        param_at_root=SpectralParam("kappa", kappa),
        residual=res,
        bracket=(lo, hi),
        evaluations=evals,
        method="krein-shift",
        setting=setting,
        alpha=float(alpha),
        N=n,
        reference_energy=ref,
        energy_offset=offset,
        log_abs_offset=log_offset,
        diagnostics={"reference_kappa": k0, "shift": root, "log_shift": log_root},
    )


def ground_state_negative(setting, alpha: float, config: Configuration,
                          kappa_min: float = KAPPA_MIN) -> SpectralResult:
    """Ground state below zero via the vanishing of the smallest secular eigenvalue.

    Eigenvalue branches of the secular matrix increase with kappa, so the
    smallest branch vanishes at the largest root, which is the ground state.
    """
    setting = Setting(setting)
    if config.setting is not setting:
        raise ArgumentError("configuration setting does not match")
    dist = distances(config)
    if setting is Setting.LOOP:
        if not alpha < 0:
            raise ArgumentError("negative-energy loop ground state needs alpha < 0")
        return _solve_loop_negative(alpha, config, dist, kappa_min)
    return _solve_free_negative(setting, alpha, config, dist, kappa_min)


# ---------------------------------------------------------------------------
# Loop: transfer matrices


def _segments(config):
    """Gap lengths starting from the midpoint of the wrap-around gap."""
    gaps = consecutive_gaps(config)
    wrap = gaps[-1]
    return np.concatenate([[0.5 * wrap], gaps[:-1], [0.5 * wrap]])


def _propagator(energy, length):
    if energy > 0:
        k = math.sqrt(energy)
        c, s = math.cos(k * length), math.sin(k * length)
        return np.array([[c, s / k], [-k * s, c]])
    if energy < 0:
        kap = math.sqrt(-energy)
        c, s = math.cosh(kap * length), math.sinh(kap * length)
        return np.array([[c, s / kap], [kap * s, c]])
    return np.array([[1.0, length], [0.0, 1.0]])


def monodromy_discriminant(alpha: float, config: Configuration, energy: float) -> Monodromy:
    """Transfer matrix once around the loop; ``energy`` is an eigenvalue iff trace = 2."""
    if config.setting is not Setting.LOOP:
        raise ArgumentError("monodromy is defined on the loop")
    segs = _segments(config)
    if energy < -1.0:
        return _monodromy_exponential(float(alpha), segs, energy)
    jump = np.array([[1.0, 0.0], [float(alpha), 1.0]])
    m = _propagator(energy, segs[0])
    for length in segs[1:]:
        m = _propagator(energy, length) @ jump @ m
    return Monodromy(m, float(energy))


def _monodromy_exponential(alpha, segs, energy):
    # basis (a, b) with psi = a e^{kx} + b e^{-kx}: segments are diagonal and the
    # jump carries 1 + alpha/(2k) explicitly, avoiding cosh/sinh cancellation
    kap = math.sqrt(-energy)
    beta = alpha / (2 * kap)
    jump = np.array([[1.0 + beta, beta], [-beta, 1.0 - beta]])
    m = np.diag([math.exp(kap * segs[0]), math.exp(-kap * segs[0])])
    for length in segs[1:]:
        m = np.diag([math.exp(kap * length), math.exp(-kap * length)]) @ jump @ m
    basis = np.array([[1.0, 1.0], [kap, -kap]])
    return Monodromy(basis @ m @ np.linalg.inv(basis), float(energy), float(np.trace(m)))


def _zeros_in_segment(energy, length, psi, dpsi):
    """Zeros of the free solution in (0, length] from initial data (psi, dpsi)."""
    if energy > 0:
        k = math.sqrt(energy)
        phi = math.atan2(psi, dpsi / k)
        return math.floor((k * length + phi) / math.pi) - math.floor(phi / math.pi)
    if dpsi == 0.0:
        return 0
    if energy < 0:
        kap = math.sqrt(-energy)
        r = -kap * psi / dpsi
        return int(0.0 < r <= math.tanh(kap * length))
    s = -psi / dpsi
    return int(0.0 < s <= length)


def _dirichlet_zero_count_exponential(alpha, segs, energy):
    # psi = a e^{kx} + b e^{-kx} vanishes in (0, l] iff 1 < -b/a <= e^{2kl}
    kap = math.sqrt(-energy)
    beta = alpha / (2 * kap)
    a, b = 1.0, -1.0
    count = 0
    last = len(segs) - 1
    for i, length in enumerate(segs):
        if a != 0.0 and 1.0 < -b / a <= math.exp(2 * kap * length):
            count += 1
        a, b = a * math.exp(kap * length), b * math.exp(-kap * length)
        if i < last:
            shift = beta * (a + b)
            a, b = a + shift, b - shift
        norm = math.hypot(a, b)
        a, b = a / norm, b / norm
    return count


def _dirichlet_zero_count(alpha, segs, energy):
    if energy < -1.0:
        return _dirichlet_zero_count_exponential(alpha, segs, energy)
    psi, dpsi = 0.0, 1.0
    count = 0
    last = len(segs) - 1
    for i, length in enumerate(segs):
        count += _zeros_in_segment(energy, length, psi, dpsi)
        psi, dpsi = _propagator(energy, length) @ np.array([psi, dpsi])
        if i < last:
            dpsi += alpha * psi
        norm = math.hypot(psi, dpsi)
        psi, dpsi = psi / norm, dpsi / norm
    return count


def _below_ground(alpha, config, segs, energy):
    """Exact test for energy < lambda1: discriminant > 2 and no Dirichlet zero."""
    if monodromy_discriminant(alpha, config, energy).discriminant <= 2.0:
        return False
    return _dirichlet_zero_count(alpha, segs, energy) == 0


def _bisect_predicate(below, lo, hi, max_iter=2000):
    """Shrink [lo, hi] with below(lo) true and below(hi) false to machine precision."""
    evals = 0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= 2 * EPS * max(abs(lo), abs(hi)):
            break
        evals += 1
        if below(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi, evals


def _loop_bracket(below, alpha, config):
    hi = dirichlet_ground(config) + 1.0
    lo = -1.0
    evals = 0
    while not below(lo):
        evals += 1
        lo *= 4.0
        if lo < -1e30:
            raise SolverError("could not bracket the loop ground state from below")
    return lo, hi, evals


def monodromy_ground_state(alpha: float, config: Configuration) -> SpectralResult:
    """Loop ground state from the transfer matrix alone (any sign of alpha)."""
    if config.setting is not Setting.LOOP:
        raise ArgumentError("monodromy is defined on the loop")
    segs = _segments(config)

    def below(e):
        return _below_ground(alpha, config, segs, e)

    lo, hi, n0 = _loop_bracket(below, alpha, config)
    lo, hi, n1 = _bisect_predicate(below, lo, hi)
    energy = 0.5 * (lo + hi)
    mono = monodromy_discriminant(alpha, config, energy)
    scale = max(1.0, float(np.abs(mono.matrix).max()))
    resid = abs(mono.discriminant - 2.0) / scale
    periodic_dim = 2 if np.abs(mono.matrix - np.eye(2)).max() <= 1e-6 * scale else 1
    return SpectralResult(
        lambda1=energy,
        param_at_root=SpectralParam.from_energy(energy) if energy != 0 else None,
        residual=resid,
        bracket=(lo, hi),
        evaluations=n0 + n1 + 1,
        method="monodromy",
        setting=Setting.LOOP,
        alpha=float(alpha),
        N=config.N,
        diagnostics={"periodic_multiplicity": periodic_dim},
    )


# ---------------------------------------------------------------------------
# Loop: Krein counting for repulsive couplings


def _free_loop_count(energy):
    """Number of free loop eigenvalues m**2 strictly below ``energy``."""
    if energy <= 0:
        return 0
    return 2 * (math.ceil(math.sqrt(energy)) - 1) + 1


def _loop_gamma_eigs(alpha, dist, energy, n):
    if energy < 0:
        g = kernels._loop_negative(math.sqrt(-energy), dist.geodesic)
    else:
        k = math.sqrt(energy)
        if k < 2 * kernels.POLE_GUARD or kernels.near_pole(k):
            # the eigenvalue count is constant across a free pole; step off it
            k = round(k) + 4 * kernels.POLE_GUARD
        g = kernels._loop_positive(k, dist.geodesic)
    return np.linalg.eigvalsh(-np.eye(n) / alpha - g)


def loop_eigenvalue_count(alpha: float, config: Configuration, energy: float) -> int:
    """Number of loop eigenvalues below ``energy`` from the secular-matrix inertia.

    Each free eigenvalue m**2 contributes to the free count and removes the
    rank of its residue from the negative index; eigenvalues of the secular
    matrix move monotonically in between.
    """
    if alpha == 0:
        return _free_loop_count(energy)
    dist = distances(config)
    n = config.N
    neg = int(np.sum(_loop_gamma_eigs(alpha, dist, energy, n) < 0))
    return _free_loop_count(energy) + neg - (n if alpha > 0 else 0)


def krein_ground_state_loop(alpha: float, config: Configuration) -> SpectralResult:
    """Loop ground state from the secular matrix only (any nonzero alpha)."""
    if alpha < 0:
        return ground_state_negative(Setting.LOOP, alpha, config)
    if alpha == 0:
        raise ArgumentError("alpha = 0 is the free loop; lambda1 = 0")
    dist = distances(config)
    n = config.N

    def below(e):
        return int(np.sum(_loop_gamma_eigs(alpha, dist, e, n) < 0)) + _free_loop_count(e) - n < 1

    lo, hi = -1.0, dirichlet_ground(config) + 1.0
    if not below(lo) or below(hi):
        raise SolverError("eigenvalue count failed to bracket the ground state")
    lo, hi, evals = _bisect_predicate(below, lo, hi)
    energy = 0.5 * (lo + hi)
    eigs = _loop_gamma_eigs(alpha, dist, energy, n)
    scale = max(1.0, float(np.abs(eigs).max()))
    return SpectralResult(
        lambda1=energy,
        param_at_root=SpectralParam.from_energy(energy),
        residual=float(np.abs(eigs).min()) / scale,
        bracket=(lo, hi),
        evaluations=evals + 2,
        method="krein-count",
        setting=Setting.LOOP,
        alpha=float(alpha),
        N=n,
    )


def _krein_sign_change(alpha, dist, n, k, rel=1e-6):
    """Does the secular determinant change sign across k?  None if a pole is in the way."""
    a, b = k * (1 - rel), k * (1 + rel)
    if math.floor(b) > math.floor(a) or kernels.near_pole(a) or kernels.near_pole(b):
        return None
    ea = _loop_gamma_eigs(alpha, dist, a * a, n)
    eb = _loop_gamma_eigs(alpha, dist, b * b, n)
    return bool(np.sum(ea < 0) % 2 != np.sum(eb < 0) % 2)


def ground_state_positive_loop(alpha: float, config: Configuration,
                               method: str = "monodromy") -> SpectralResult:
    """Positive ground state of the repulsive loop.

    The monodromy route is primary; the result carries a check that the
    secular determinant changes sign across the root when no pole intervenes.
    """
    if config.setting is not Setting.LOOP:
        raise ArgumentError("repulsive solver is defined on the loop")
    if not alpha > 0:
        raise ArgumentError("repulsive ground state needs alpha > 0")
    if method == "krein":
        return krein_ground_state_loop(alpha, config)
    if method != "monodromy":
        raise ArgumentError(f"unknown method {method!r}")
    result = monodromy_ground_state(alpha, config)
    k = math.sqrt(result.lambda1)
    result.diagnostics["krein_sign_change"] = _krein_sign_change(
        alpha, distances(config), config.N, k)
    return result


# ---------------------------------------------------------------------------
# Dispatch, critical coupling, Dirichlet limit


def _weak_series_loop(alpha, config):
    from .asymptotics import c2_closed

    lam = config.N * alpha / kernels.TWO_PI + c2_closed(config) * alpha * alpha
    return SpectralResult(lam, SpectralParam.from_energy(lam), 0.0, (lam, lam), 0, "weak-series",
                          Setting.LOOP, float(alpha), config.N,
                          diagnostics={"truncation": "O(alpha**3)"})


def ground_state(setting, alpha: float, config: Configuration) -> SpectralResult:
    """Ground state in any setting with the primary method for that regime.

    On the loop, ``0 < |alpha| <= WEAK_SERIES_ALPHA`` uses the second-order
    weak-coupling series, which there is more accurate than either root finder.
    """
    setting = Setting(setting)
    if setting is Setting.LOOP:
        if config.setting is not setting:
            raise ArgumentError("configuration setting does not match")
        if 0 < abs(alpha) <= WEAK_SERIES_ALPHA:
            return _weak_series_loop(alpha, config)
        if alpha > 0:
            return ground_state_positive_loop(alpha, config)
        if alpha == 0:
            return SpectralResult(0.0, None, 0.0, (0.0, 0.0), 0, "free", setting, 0.0, config.N)
    return ground_state_negative(setting, alpha, config)


def alpha_crit(config: Configuration) -> float:
    """Critical coupling for nu = 3: a bound state exists iff alpha < alpha_crit."""
    if config.setting.nu != 3:
        raise ArgumentError("alpha_crit is defined for nu = 3 settings")
    if config.N == 1:
        return 0.0
    ell = distances(config).chordal + np.eye(config.N)
    c = 1.0 / (4.0 * math.pi * ell)
    np.fill_diagonal(c, 0.0)
    return float(np.linalg.eigvalsh(c)[-1])


def dirichlet_ground(config: Configuration) -> float:
    """Ground state of the loop with Dirichlet conditions at every site."""
    if config.setting is not Setting.LOOP:
        raise ArgumentError("Dirichlet limit is defined on the loop")
    return (math.pi / consecutive_gaps(config).max()) ** 2
