"""Verification suites comparing closed forms against the numerical oracles.

Each suite returns a list of Check records; the CLI turns them into a
report and a non-zero exit status when anything fails.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import analytic, classical, numeric, special
from .model import ModelParameters, validate

SEED = 20240601
DEFAULT_LAMBDAS = (-1.0, -0.5, 0.0, 0.5, 1.0)


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    passed: bool
    measured: float
    tolerance: float

    def as_dict(self) -> dict:
        return asdict(self)


def _check(group, name, measured, tolerance, passed=None) -> Check:
    measured = float(measured)
    if passed is None:
        passed = measured < tolerance
    return Check(group, name, bool(passed), measured, float(tolerance))


# --- classical -----------------------------------------------------------------

def random_oscillatory_cases(count: int = 20, seed: int = SEED, mass: float = 1.0, omega: float = 1.0):
    """(params, E) pairs with lam in [-2, 2] and E inside the oscillatory window."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        lam = rng.uniform(-2.0, 2.0)
        params = validate(lam, omega, mass)
        top = mass * math.sqrt(1.0 + 1.0 / lam) if lam > 0 else 3.0 * mass
        energy = mass + rng.uniform(0.001, 0.98) * (top - mass)
        out.append((params, energy))
    return out


def orbit_deviation(params: ModelParameters, energy: float, periods: float = 3.0, samples: int = 600):
    """(max |x_numeric - x_closed|, energy drift) over a few periods."""
    orbit = classical.orbit_from_energy(params, energy)
    t_max = periods * orbit.period
    path = classical.integrate_geodesic(params, 0.0, classical.max_speed(params, energy), t_max, t_max / samples)
    dev = float(np.max(np.abs(path.x - orbit.position(path.t))))
    return dev, path.energy_drift


def classical_suite(count: int = 20) -> list[Check]:
    checks = []
    devs, drifts, ident = [], [], []
    for params, energy in random_oscillatory_cases(count):
        dev, drift = orbit_deviation(params, energy)
        devs.append(dev)
        drifts.append(drift)
        orbit = classical.orbit_from_energy(params, energy)
        ident.append(abs(orbit.omega_eff * orbit.amplitude - math.sqrt(1.0 - (params.mass / energy) ** 2)))
    checks.append(_check("classical", "geodesic vs closed-form orbit, max |dx|", max(devs), 1e-6))
    checks.append(_check("classical", "energy drift along geodesic", max(drifts), 1e-9))
    checks.append(_check("classical", "Omega * a = sqrt(1 - m^2/E^2)", max(ident), 1e-12))
    rest = []
    for lam in (-2.0, -1.0, -0.3, 0.0, 0.4, 2.0):
        p = validate(lam, 1.3, 0.7)
        rest.append(abs(classical.effective_frequency(p, p.mass) - p.omega) + classical.amplitude(p, p.mass))
    checks.append(_check("classical", "Omega(E=m) = omega and a(E=m) = 0", max(rest), 1e-15))
    return checks


def nr_classical_errors(params: ModelParameters, ratio: float) -> tuple[float, float]:
    """Relative deviations of Omega and a^2 from their non-relativistic forms at E_nr = ratio * m."""
    m, w = params.mass, params.omega
    e_nr = ratio * m
    energy = m + e_nr
    om = classical.effective_frequency(params, energy)
    a2 = classical.amplitude(params, energy) ** 2
    return abs(om - w) / w, abs(a2 - 2.0 * e_nr / (m * m * w * w)) / a2


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


# --- quantum -------------------------------------------------------------------

def oracle_table(lambdas=DEFAULT_LAMBDAS, mass: float = 2.0, omega: float = 1.0, levels: int = 5):
    """Rows (lam, n, E_analytic, E_numeric, rel_diff)."""
    rows = []
    for lam in lambdas:
        params = validate(lam, omega, mass)
        spec = analytic.discrete_spectrum(params, levels)
        k = min(levels, len(spec))
        num = numeric.sturm_liouville_eigen(params, k)
        for lev, e_num in zip(spec.levels[:k], num.energies):
            rows.append((lam, lev.n, lev.energy, float(e_num), abs(e_num - lev.energy) / lev.energy))
    return rows


def quantum_suite(lambdas=DEFAULT_LAMBDAS, mass: float = 2.0, omega: float = 1.0) -> list[Check]:
    checks = []
    for lam, n, e_an, e_num, rel in oracle_table(lambdas, mass, omega):
        checks.append(_check("quantum", f"lambda={lam:g} n={n}: E={e_an:.12g} vs oracle {e_num:.12g}", rel, 1e-6))
    for lam in lambdas:
        params = validate(lam, omega, mass)
        spec = analytic.discrete_spectrum(params, 5)
        if lam != 0:
            worst = 0.0
            for lev in spec.levels:
                sp = analytic.spectral_parameters(params, lev.energy)
                target = (lev.p + lev.s + lev.nprime) ** 2
                worst = max(worst, abs(sp.nu - target) / abs(target))
            checks.append(_check("quantum", f"lambda={lam:g}: nu(E_n) = (p+s+n')^2", worst, 1e-12))
        if lam > 0:
            thr = analytic.continuum_threshold(params)
            inside = all(params.mass <= lev.energy < thr for lev in spec.levels)
            checks.append(_check("quantum", f"lambda={lam:g}: levels inside [m, threshold)", 0.0 if inside else 1.0,
                                 0.5))
    return checks


def structure_suite(lambdas=DEFAULT_LAMBDAS, mass: float = 2.0, omega: float = 1.0) -> list[Check]:
    checks = []
    for lam in lambdas:
        params = validate(lam, omega, mass)
        levels = analytic.discrete_spectrum(params, 4).levels[:4]
        bad_nodes = sum(numeric.node_count(params, lev) != lev.n for lev in levels)
        checks.append(_check("structure", f"lambda={lam:g}: node_count(n) = n", bad_nodes, 0.5))
        worst = 0.0
        for lev in levels:
            half = min(numeric.default_grid(params, lev.energy**2, 64).half_width, 0.999 * numeric.liouville_extent(params))
            x = numeric.from_liouville(params, np.linspace(0.01, half, 200))
            u, um = lev(x), lev(-x)
            worst = max(worst, float(np.max(np.abs(um - lev.parity * u)) / np.max(np.abs(u))))
        checks.append(_check("structure", f"lambda={lam:g}: parity (-1)^n", worst, 1e-12))
        gram = numeric.gram_matrix(params, levels)
        checks.append(_check("structure", f"lambda={lam:g}: Gram matrix max|G - I|", np.max(np.abs(gram - np.eye(len(levels)))), 1e-8))
    params = validate(1.0, 1.0, 2.0)
    report = numeric.norm_divergence_check(params, 3.0, 0.0)
    checks.append(_check("structure", "lambda=1 E=3: truncated norm grows without plateau", 0.0 if report.diverges else 1.0, 0.5))
    return checks


def special_suite() -> list[Check]:
    checks = []
    worst = 0.0
    for a, b, c in _generated_parameters():
        for y in np.linspace(-50.0, -0.05, 40):
            val = special.hyp2f1(a, b, c, y).value
            t = y / (y - 1.0)
            ref = (1.0 - y) ** (-a) * special.gauss_series(a, c - b, c, t).value
            worst = max(worst, abs(val - ref) / abs(ref))
    checks.append(_check("special", "Pfaff consistency on y in [-50, 0)", worst, 1e-12))
    worst = 0.0
    for nprime, b, c in spectrum_polynomials():
        for y in np.linspace(-0.95, 0.95, 39):
            poly = special.hyp2f1_polynomial(nprime, b, c, y)
            series = special.hyp2f1(-nprime, b, c, y).value
            worst = max(worst, abs(poly - series) / max(abs(series), 1e-300))
    checks.append(_check("special", "terminating polynomial vs series", worst, 1e-12))
    worst = 0.0
    z = np.linspace(0.2, 3.0, 30)
    for n in range(0, 11):
        s, nprime = analytic.quantum_numbers(n)
        ratio = special.hermite(n, z) / (z ** (2 * s) * special.hyp1f1_polynomial(nprime, 2 * s + 0.5, z * z))
        ok = np.isfinite(ratio)
        worst = max(worst, float(np.ptp(ratio[ok]) / np.max(np.abs(ratio[ok]))))
    checks.append(_check("special", "H_n proportional to z^2s 1F1(-n', 2s+1/2, z^2)", worst, 1e-10))
    return checks


SAMPLE_MODELS = ((-1.0, 1.0, 1.0, 5), (1.0, 1.0, 2.0, 2), (-1.0, 1.0, 2.0, 5), (-0.5, 1.0, 2.0, 5), (0.5, 1.0, 2.0, 4))


def spectrum_polynomials():
    """(n', b, c) of F(-n', b; c; y) for every level of the sample spectra."""
    out = []
    for lam, omega, mass, count in SAMPLE_MODELS:
        params = validate(lam, omega, mass)
        for lev in analytic.discrete_spectrum(params, count).levels:
            out.append((lev.nprime, 2 * lev.p + 2 * lev.s + lev.nprime, 2 * lev.s + 0.5))
    return out


def _generated_parameters():
    """Non-terminating neighbours of the spectrum polynomials, so the full series is exercised."""
    return [(-nprime + 0.37, b, c) for nprime, b, c in spectrum_polynomials()]


def limits_suite() -> list[Check]:
    checks = []
    ratios = np.array([1e-4, 1e-5, 1e-6])
    for lam in (-0.5, 0.0, 0.5, 1.0):
        params = validate(lam, 1.0, 1.0)
        errs = np.array([nr_classical_errors(params, r) for r in ratios])
        checks.append(_check("limits", f"lambda={lam:g}: |Omega - w|/w slope in E_nr/m", abs(loglog_slope(ratios, errs[:, 0]) - 1.0), 0.05))
        checks.append(_check("limits", f"lambda={lam:g}: a^2 NR error slope in E_nr/m", abs(loglog_slope(ratios, errs[:, 1]) - 1.0), 0.05))
    params = validate(-1.0, 1.0, 1000.0)
    gap = (analytic.energy_level(params, 0).energy - params.mass) / params.omega
    checks.append(_check("limits", "lambda=-1 m/w=1000: (E0 - m)/w - 1/2", abs(gap - 0.5), 1e-3, passed=gap > 0.5 and abs(gap - 0.5) < 1e-3))
    worst = 0.0
    for n in range(6):
        e0 = analytic.energy_level(validate(0.0, 1.0, 2.0), n).energy
        for lam in (1e-4, -1e-4):
            worst = max(worst, abs(analytic.energy_level(validate(lam, 1.0, 2.0), n).energy - e0))
    checks.append(_check("limits", "|E_n(+-1e-4) - E_n(0)| / w, n <= 5", worst, 1e-3))
    return checks


SUITES = {
    "classical": classical_suite,
    "quantum": quantum_suite,
    "structure": structure_suite,
    "special": special_suite,
    "limits": limits_suite,
}


def run_suite(name: str, lambdas=None) -> list[Check]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, lambdas))
        return out
    if name not in SUITES:
        raise KeyError(name)
    if name in ("quantum", "structure") and lambdas is not None:
        return SUITES[name](lambdas)
    return SUITES[name]()
