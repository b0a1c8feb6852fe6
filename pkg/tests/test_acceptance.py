"""Acceptance criteria 1-10.

Each test records one ``CRITERION k: PASS|FAIL`` line; the lines are repeated
in the pytest terminal summary.  Run directly with ``python -m pytest
tests/test_acceptance.py -v`` (about three minutes on one core).
"""

import math
import time

import numpy as np
import pytest

from pointopt.asymptotics import c2_closed, c2_maximality, c2_series, weak_expansion_check
from pointopt.configurations import (
    Configuration,
    Setting,
    canonical_loop,
    random_config,
    sharp_sphere,
    spherical_design_strength,
)
from pointopt.kernels import complete_monotonicity_check
from pointopt.optimizer import (
    conjecture_scan,
    maximize_lambda1,
    minimize_surface_energy,
    surface_energy,
    verify_theorem,
)
from pointopt.spectral import (
    ground_state,
    ground_state_negative,
    krein_ground_state_loop,
    monodromy_ground_state,
)
from tests.acceptance_log import record


def finish(number, passed, detail, elapsed, budget):
    ok = passed and elapsed < budget
    record(number, ok, f"{detail} [{elapsed:.1f}s / budget {budget:.0f}s]")
    assert ok, detail


def test_criterion_01_single_point_anchor():
    t = time.perf_counter()
    cfg = Configuration.from_vectors([[0.0, 0.0, 1.0]])
    lam = ground_state(Setting.SPHERE, -1.0, cfg).lambda1
    rel = abs(lam / (-16 * math.pi**2) - 1)
    finish(1, rel <= 1e-8, f"lambda1 = {lam:.15g}, rel err {rel:.1e}", time.perf_counter() - t, 1)


def test_criterion_02_krein_vs_transfer():
    t = time.perf_counter()
    rng = np.random.default_rng(2)
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(2, 7))
        cfg = random_config(Setting.LOOP, n, 5000 + i)
        if i < 50:
            alpha = -(10 ** rng.uniform(-1, 1))
            a = ground_state_negative(Setting.LOOP, alpha, cfg).lambda1
        else:
            alpha = 10 ** rng.uniform(-1, 1.5)
            a = krein_ground_state_loop(alpha, cfg).lambda1
        b = monodromy_ground_state(alpha, cfg).lambda1
        worst = max(worst, abs(a - b))
    finish(2, worst <= 1e-9, f"max |krein - transfer| = {worst:.1e} over 100 cases",
           time.perf_counter() - t, 30)


def test_criterion_03_loop_campaign():
    t = time.perf_counter()
    violations, min_gap = 0, math.inf
    for alpha in (-0.5, -2.0, -10.0):
        for n in range(2, 9):
            rep = verify_theorem(Setting.LOOP, alpha, n, 200, seed=100 * n)
            violations += rep.violations + rep.sign_violations
            if rep.min_gap is not None:
                min_gap = min(min_gap, rep.min_gap)
    finish(3, violations == 0 and min_gap > 1e-7,
           f"violations {violations}, min non-congruent margin {min_gap:.3e}", time.perf_counter() - t, 300)


def test_criterion_04_circle_campaign():
    t = time.perf_counter()
    violations, sign_violations, min_log = 0, 0, math.inf
    cases = [(Setting.CIRCLE2, -1.0), (Setting.CIRCLE2, 0.0), (Setting.CIRCLE2, 2.0), (Setting.CIRCLE3, -1.0)]
    for setting, alpha in cases:
        for n in range(2, 7):
            rep = verify_theorem(setting, alpha, n, 100, seed=100 * n)
            violations += rep.violations
            sign_violations += rep.sign_violations
            if rep.log_min_gap is not None:
                min_log = min(min_log, rep.log_min_gap)
    finish(4, violations == 0 and sign_violations == 0,
           f"violations {violations}, non-positive margins {sign_violations}, "
           f"smallest margin exp({min_log:.1f})", time.perf_counter() - t, 300)


def test_criterion_05_sphere_recovery():
    t = time.perf_counter()
    failures = []
    for n in (2, 3, 4, 6, 12):
        sharp = sharp_sphere(n)[0]
        for kappa in (0.5, 1.0, 2.0):
            rep = minimize_surface_energy(kappa, n, starts=50, seed=0, tol=1e-5)
            gap = rep.best_value - surface_energy(sharp, kappa).value
            if not rep.matched_canonical or abs(gap) > 1e-8:
                failures.append(f"surface N={n} kappa={kappa}")
    for n in (2, 3, 4, 6):
        if not maximize_lambda1(Setting.SPHERE, -1.0, n, starts=20, seed=0, tol=1e-5).matched_canonical:
            failures.append(f"lambda1 N={n}")
    t12 = time.perf_counter()
    rep12 = maximize_lambda1(Setting.SPHERE, -1.0, 12, starts=10, seed=0, tol=1e-3)
    t12 = time.perf_counter() - t12
    if not rep12.matched_canonical or t12 > 600:
        failures.append(f"lambda1 N=12 ({t12:.0f}s)")
    finish(5, not failures, "all sharp configurations recovered" if not failures else f"failed: {failures}",
           time.perf_counter() - t, 1800)


def test_criterion_06_design_strength():
    t = time.perf_counter()
    need = {2: 1, 3: 1, 4: 1, 6: 3, 12: 5}
    got = {n: spherical_design_strength(sharp_sphere(n)[0], tol=1e-10) for n in need}
    finish(6, all(got[n] >= need[n] for n in need), f"strengths {got}", time.perf_counter() - t, 1)


def test_criterion_07_complete_monotonicity():
    t = time.perf_counter()
    pts = np.geomspace(1e-3, 4.0, 64)
    worst = 0.0
    passed = True
    for kappa in (0.5, 1.0, 2.0):
        f = lambda s, k=kappa: np.exp(-k * np.sqrt(s)) / (4 * math.pi * np.sqrt(s))
        rep = complete_monotonicity_check(f, 6, pts, tol=1e-12)
        passed &= rep.passed
        worst = max(worst, rep.worst_violation)
    finish(7, passed and worst < 1e-12, f"worst violation {worst:.1e} to order 6", time.perf_counter() - t, 1)


def test_criterion_08_weak_coupling():
    t = time.perf_counter()
    details, ok = [], True
    grid = np.linspace(0.01, 0.1, 10)
    for n in (2, 3, 4):
        for cfg in (canonical_loop(n), random_config(Setting.LOOP, n, 80 + n)):
            rep = weak_expansion_check(cfg, grid, m_max=1_000_000)
            c1_err = abs(rep.c1_fit / (n / (2 * math.pi)) - 1)
            c2_err = abs(rep.expansion.c2_series - rep.expansion.c2_closed)
            ok &= c1_err <= 1e-2 and c2_err <= 1e-8 and rep.exponent >= 2.7
            details.append(f"N={n}: c1 {c1_err:.1e}, c2 {c2_err:.1e}, p {rep.exponent:.2f}")
    finish(8, ok, "; ".join(details[::2]), time.perf_counter() - t, 120)


def test_criterion_09_strong_coupling():
    t = time.perf_counter()
    ok, notes = True, []
    for n in range(2, 7):
        lam = ground_state(Setting.LOOP, 1e3, canonical_loop(n)).lambda1
        rel = abs(lam / (n * n / 4) - 1)
        ok &= rel < 1e-2
        notes.append(f"{rel:.1e}")
        seq = [ground_state(Setting.LOOP, a, canonical_loop(n)).lambda1 for a in (1.0, 10.0, 1e2, 1e3)]
        ok &= bool(np.all(np.diff(seq) > 0))
    gaps = []
    for n in range(2, 9):
        out = c2_maximality(n, 100, seed=900 * n)
        ok &= out["violations"] == 0 and (out["min_gap"] is None or out["min_gap"] > 0)
        gaps.append(out["min_gap"])
    finish(9, ok, f"rel err at alpha=1e3 {notes}; min c2 gap {min(g for g in gaps if g is not None):.2e}",
           time.perf_counter() - t, 180)


def test_criterion_10_conjecture_scan():
    t = time.perf_counter()
    findings = []
    for n in (3, 5):
        for row in conjecture_scan(n, [0.1, 1.0, 10.0, 50.0], 50, seed=10 * n):
            if row["violations"] or row["sign_violations"]:
                findings.append((n, row["alpha"], row["violations"]))
    detail = "report generated, no counterexample" if not findings else f"FINDING: counterexamples {findings}"
    # a counterexample is a finding to surface, not a failure of this criterion
    finish(10, True, detail, time.perf_counter() - t, 300)
    if findings:
        pytest.skip(detail)
