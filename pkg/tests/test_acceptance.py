"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed together in
the terminal summary (and immediately, when run with -s).
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from georho import analytic, numeric, verify
from georho.model import validate
from georho.special import hermite

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def record(number: int, title: str, checks: dict, elapsed: float | None = None) -> bool:
    """checks maps a description to (passed, measured text)."""
    ok = all(passed for passed, _ in checks.values())
    details = "; ".join(f"{name} {text}{'' if passed else ' [X]'}" for name, (passed, text) in checks.items())
    timing = "" if elapsed is None else f" ({elapsed:.2f} s)"
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}{timing} | {details}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_ads_spectrum():
    start = time.perf_counter()
    p = validate(-1.0, 1.0, 1.0)
    spec = analytic.discrete_spectrum(p, 5)
    pp, _ = analytic.exponent_roots(1.0)
    ladder = np.array([2 * pp + n for n in range(5)])
    num = numeric.sturm_liouville_eigen(p, 5).energies
    elapsed = time.perf_counter() - start
    an_err = np.max(np.abs(spec.energies - ladder))
    golden = abs(2 * pp - GOLDEN)
    rel = np.max(np.abs(num - spec.energies) / spec.energies)
    sp_an = np.max(np.abs(np.diff(spec.energies) - 1.0))
    sp_num = np.max(np.abs(np.diff(num) - 1.0))
    checks = {
        "E_n = w(2p+ + n)": (an_err < 1e-12, f"{an_err:.1e}"),
        "2p+ = golden ratio": (golden < 1e-15, f"{golden:.1e}"),
        "oracle rel err": (rel < 1e-6, f"{rel:.1e} < 1e-6"),
        "analytic spacing dev": (sp_an < 1e-10, f"{sp_an:.1e} < 1e-10"),
        "numeric spacing dev": (sp_num < 1e-6, f"{sp_num:.1e} < 1e-6"),
        "runtime": (elapsed < 5.0, f"{elapsed:.2f} s < 5 s"),
    }
    assert record(1, "AdS spectrum", checks, elapsed)


def test_criterion_2_finite_spectrum():
    start = time.perf_counter()
    p = validate(1.0, 1.0, 2.0)
    spec = analytic.discrete_spectrum(p)
    thr = analytic.continuum_threshold(p)
    expected = np.array([2.358302, 2.772131])
    an_rel = np.max(np.abs(spec.energies - expected) / expected)

    vinf = numeric.asymptotic_potential(p)
    h = 1.0 / 60.0
    counts, estimates = [], []
    for half in (10.0, 20.0, 40.0, 80.0):
        grid = numeric.GridSpec(int(2 * half / h), half, "asinh")
        counts.append(numeric.count_below(p, grid, vinf))
        estimates.append(numeric.sturm_liouville_eigen(p, 2, grid=grid).energies)
    estimates = np.array(estimates)
    steps = np.max(np.abs(np.diff(estimates, axis=0)), axis=1)
    converging = bool(np.all(np.diff(steps) <= 0))
    final_rel = np.max(np.abs(estimates[-1] - spec.energies) / spec.energies)
    elapsed = time.perf_counter() - start
    checks = {
        "n_max": (spec.n_max == 1 and len(spec) == 2, f"{spec.n_max}"),
        "E vs 2.358302, 2.772131": (an_rel < 1e-5, f"{an_rel:.1e} rel"),
        "below 2 sqrt 2": (bool(np.all(spec.energies < thr)) and abs(thr - 2 * math.sqrt(2)) < 1e-15, f"{thr:.6f}"),
        "oracle count per box": (counts == [2, 2, 2, 2], f"{counts}"),
        "converges with L": (converging, "steps " + ", ".join(f"{s:.1e}" for s in steps)),
        "oracle rel err": (final_rel < 1e-5, f"{final_rel:.1e} < 1e-5"),
        "runtime": (elapsed < 30.0, f"{elapsed:.2f} s < 30 s"),
    }
    assert record(2, "finite spectrum, lambda = 1", checks, elapsed)


def test_criterion_3_flat_oscillator():
    p = validate(0.0, 1.0, 1.0)
    n_levels = 6
    exact2 = np.array([1.0 + 2.0 * (n + 0.5) for n in range(n_levels)])
    num = numeric.sturm_liouville_eigen(p, n_levels)
    rel = np.max(np.abs(num.energies_squared - exact2) / exact2)
    an_rel = np.max(np.abs(analytic.discrete_spectrum(p, n_levels).energies ** 2 - exact2) / exact2)
    grid = numeric._size_grid(p, n_levels).refined(2)
    _, vecs = numeric.fd_eigenpairs(p, grid, n_levels)
    x = grid.interior()
    overlaps = []
    for n in range(n_levels):
        h = np.exp(-x * x / 2) * hermite(n, x)
        overlaps.append(abs(np.dot(vecs[:, n], h)) / (np.linalg.norm(vecs[:, n]) * np.linalg.norm(h)))
    worst = 1.0 - min(overlaps)
    checks = {
        "closed form": (an_rel < 1e-14, f"{an_rel:.1e}"),
        "oracle E^2 rel err": (rel < 1e-6, f"{rel:.1e} < 1e-6"),
        "1 - overlap": (worst < 1e-8, f"{worst:.1e} < 1e-8"),
    }
    assert record(3, "lambda = 0 oscillator structure", checks)


def test_criterion_4_classical_oracle():
    start = time.perf_counter()
    devs, drifts = [], []
    cases = verify.random_oscillatory_cases(20)
    for params, energy in cases:
        dev, drift = verify.orbit_deviation(params, energy, periods=3.0)
        devs.append(dev)
        drifts.append(drift)
    lams = [p.lam for p, _ in cases]
    checks = {
        "cases": (len(cases) == 20 and min(lams) >= -2 and max(lams) <= 2, f"{len(cases)} in [{min(lams):.2f}, {max(lams):.2f}]"),
        "max |x - a sin|": (max(devs) < 1e-6, f"{max(devs):.1e} < 1e-6"),
        "energy drift": (max(drifts) < 1e-9, f"{max(drifts):.1e} < 1e-9"),
    }
    assert record(4, "classical geodesic oracle", checks, time.perf_counter() - start)


def test_criterion_5_nonrelativistic_limits():
    ratios = np.array([1e-4, 1e-5, 1e-6])
    slopes = []
    exact_ads = 0.0
    for lam in (-1.0, -0.5, 0.0, 0.5, 1.0):
        errs = np.array([verify.nr_classical_errors(validate(lam, 1.0, 1.0), r) for r in ratios])
        slopes.append(verify.loglog_slope(ratios, errs[:, 1]))
        if lam == -1.0:
            # Omega = w for every energy at lam = -1, so there is no slope to fit
            exact_ads = float(np.max(errs[:, 0]))
        else:
            slopes.append(verify.loglog_slope(ratios, errs[:, 0]))
    slope_dev = max(abs(s - 1.0) for s in slopes)

    p = validate(-1.0, 1.0, 1000.0)
    gap = (analytic.energy_level(p, 0).energy - p.mass) / p.omega

    worst = 0.0
    for mass in (1.0, 2.0):
        for n in range(6):
            e0 = analytic.energy_level(validate(0.0, 1.0, mass), n).energy
            for lam in (1e-4, -1e-4):
                worst = max(worst, abs(analytic.energy_level(validate(lam, 1.0, mass), n).energy - e0))
    checks = {
        "(a) log-log slopes": (slope_dev < 0.05, f"max |slope - 1| = {slope_dev:.1e}"),
        "(a) Omega at lam=-1": (exact_ads < 1e-15, f"|Omega - w|/w = {exact_ads:.1e}"),
        "(b) (E0 - m)/w": (gap > 0.5 and abs(gap - 0.5) < 1e-3, f"{gap:.7f}"),
        "(c) |E_n(+-1e-4) - E_n(0)|": (worst < 1e-3, f"{worst:.1e} < 1e-3 w"),
    }
    assert record(5, "non-relativistic limits", checks)


def test_criterion_6_orthonormality():
    worst = {}
    for lam in (-1.0, 0.5):
        p = validate(lam, 1.0, 2.0)
        levels = analytic.discrete_spectrum(p, 4).levels[:4]
        g = numeric.gram_matrix(p, levels)
        worst[lam] = (len(levels), float(np.max(np.abs(g - np.eye(len(levels))))))
    checks = {f"lambda={lam:g} ({n} states)": (n == 4 and err < 1e-8, f"{err:.1e} < 1e-8") for lam, (n, err) in worst.items()}
    assert record(6, "Gram matrix of first four states", checks)


def test_criterion_7_structure():
    models = [(-1.0, 1.0, 1.0, 5), (1.0, 1.0, 2.0, None), (0.0, 1.0, 1.0, 6), (-1.0, 1.0, 2.0, 4), (0.5, 1.0, 2.0, 4)]
    bad_nodes, bad_parity, total = 0, 0.0, 0
    for lam, omega, mass, count in models:
        p = validate(lam, omega, mass)
        for lev in analytic.discrete_spectrum(p, count).levels:
            total += 1
            bad_nodes += numeric.node_count(p, lev) != lev.n
            half = min(numeric.node_grid(p, lev).half_width, 0.999 * numeric.liouville_extent(p))
            x = numeric.from_liouville(p, np.linspace(0.01, half, 300))
            u = lev(x)
            bad_parity = max(bad_parity, float(np.max(np.abs(lev(-x) - lev.parity * u)) / np.max(np.abs(u))))
    report = numeric.norm_divergence_check(validate(1.0, 1.0, 2.0), 3.0, 0.0, caps=(10.0, 100.0, 1000.0))
    monotone = bool(np.all(np.diff(report.norms) > 0))
    checks = {
        "node_count = n": (bad_nodes == 0, f"{total - bad_nodes}/{total}"),
        "parity (-1)^n": (bad_parity < 1e-12, f"{bad_parity:.1e}"),
        "continuum norm, caps 10/100/1000": (
            monotone and report.diverges and report.caps[:3] == (10.0, 100.0, 1000.0),
            "norms " + ", ".join(f"{v:.4g}" for v in report.norms) + f" ({report.verdict})",
        ),
    }
    assert record(7, "node, parity and normalisability structure", checks)


def test_criterion_8_special_functions():
    checks = {}
    for chk in verify.special_suite():
        if "Pfaff" in chk.name or "polynomial vs series" in chk.name:
            checks[chk.name] = (chk.passed and chk.measured < 1e-12, f"{chk.measured:.1e} < 1e-12")
    assert len(checks) == 2
    assert record(8, "hypergeometric consistency on spectrum parameters", checks)
