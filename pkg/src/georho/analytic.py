"""Closed-form Klein-Gordon spectra and mode functions.

The stationary equation

    (1 + lam w^2 x^2) U'' + lam w^2 x U' + E^2 U - m^2 (1 + (1+lam) w^2 x^2)/(1 + lam w^2 x^2) U = 0

is solved by U = (1 + lam w^2 x^2)^p x^(2s) F(-n', 2p+2s+n'; 2s+1/2; -lam w^2 x^2)
with 4p^2 - 2p = mu^2, s in {0, 1/2}. Square integrability picks p_minus
for lam > 0 (finitely many levels) and p_plus for lam < 0 (countably many).
lam = 0 is handled separately: it is the ordinary oscillator in E^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import BelowContinuum, InvalidParameters, NotNormalizable
from .model import ModelParameters, check_in_domain


@dataclass(frozen=True)
class SpectralParameters:
    """Dimensionless bookkeeping; all fields are None for the flat (lam = 0) model."""

    epsilon: float | None
    mu: float | None
    nu: float | None
    p_plus: float | None
    p_minus: float | None

    @property
    def flat(self) -> bool:
        return self.mu is None


@dataclass(frozen=True)
class QuantumLevel:
    params: ModelParameters
    n: int
    s: float
    nprime: int
    p: float | None
    energy: float

    def __call__(self, x):
        return wavefunction_value(self.params, self, x)

    @property
    def parity(self) -> int:
        return -1 if self.n % 2 else 1


@dataclass(frozen=True)
class DiscreteSpectrum:
    params: ModelParameters
    levels: tuple[QuantumLevel, ...]
    n_max: int | None = None
    continuum_threshold: float | None = None
    countable: bool = False

    @property
    def energies(self) -> np.ndarray:
        return np.array([lev.energy for lev in self.levels])

    def __len__(self):
        return len(self.levels)


def exponent_roots(mu2: float) -> tuple[float, float]:
    """Roots of 4p^2 - 2p - mu^2 = 0, written to avoid cancellation in p_minus."""
    return _roots_from_mu(math.sqrt(mu2))


def _roots_from_mu(mu: float) -> tuple[float, float]:
    # hypot and the split product keep |mu| up to ~1e300 finite
    mu = abs(mu)
    if not math.isfinite(mu):
        raise InvalidParameters("m / (lambda omega) overflows; lambda is too close to 0, use lambda = 0")
    root = math.hypot(1.0, 2.0 * mu)
    return 0.25 * (1.0 + root), -mu * (mu / (1.0 + root))


def _require_curved(params: ModelParameters) -> None:
    if params.lam == 0:
        raise InvalidParameters("lambda = 0 has no (epsilon, mu, nu, p) parametrisation")


def mu_of(params: ModelParameters) -> float:
    _require_curved(params)
    return params.mass / (params.lam * params.omega)


def spectral_parameters(params: ModelParameters, energy: float) -> SpectralParameters:
    if energy <= 0:
        raise ValueError("energy must be positive")
    if params.lam == 0:
        return SpectralParameters(None, None, None, None, None)
    lw = params.lam * params.omega
    eps = energy / lw
    mu = params.mass / lw
    nu = 0.25 * ((1.0 + params.lam) * mu * mu - params.lam * eps * eps)
    p_plus, p_minus = _roots_from_mu(mu)
    return SpectralParameters(eps, mu, nu, p_plus, p_minus)


def exponent_branch(params: ModelParameters) -> float:
    """p_minus for lam > 0, p_plus for lam < 0."""
    _require_curved(params)
    p_plus, p_minus = _roots_from_mu(mu_of(params))
    return p_minus if params.lam > 0 else p_plus


def n_max(params: ModelParameters) -> int | None:
    """Largest n with n < -2 p_minus (lam > 0 only)."""
    if params.lam <= 0:
        return None
    bound = -2.0 * exponent_branch(params)
    k = math.floor(bound)
    # n = -2 p_minus exactly sits on the threshold and is not normalizable
    return k - 1 if k == bound else k


def continuum_threshold(params: ModelParameters) -> float | None:
    if params.lam <= 0:
        return None
    return params.mass * math.sqrt(1.0 + 1.0 / params.lam)


def quantum_numbers(n: int) -> tuple[float, int]:
    """(s, n') with n = 2(n' + s): even n -> s = 0, odd n -> s = 1/2."""
    s = 0.5 * (n % 2)
    return s, (n - n % 2) // 2


def energy_squared(params: ModelParameters, n: int) -> float:
    lam, w, m = params.lam, params.omega, params.mass
    if lam == 0:
        return m * m + 2.0 * m * w * (n + 0.5)
    p = exponent_branch(params)
    return m * m - lam * w * w * (4.0 * p * (n + 0.5) + n * n)


def energy_level(params: ModelParameters, n: int) -> QuantumLevel:
    n = int(n)
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    top = n_max(params)
    if top is not None and n > top:
        raise NotNormalizable(f"n = {n} exceeds n_max = {top} for lambda = {params.lam}")
    s, nprime = quantum_numbers(n)
    p = None if params.lam == 0 else exponent_branch(params)
    return QuantumLevel(params, n, s, nprime, p, math.sqrt(energy_squared(params, n)))


def discrete_spectrum(params: ModelParameters, max_levels: int | None = None) -> DiscreteSpectrum:
    """Bound levels in increasing energy.

    For lam > 0 the spectrum is finite and all n_max + 1 levels are returned
    unless ``max_levels`` asks for fewer. For lam <= 0 it is infinite and
    ``max_levels`` is required.
    """
    top = n_max(params)
    if max_levels is not None and max_levels < 1:
        raise ValueError("max_levels must be >= 1")
    if top is None:
        if max_levels is None:
            raise ValueError("max_levels is required for lambda <= 0")
        count = int(max_levels)
    else:
        count = top + 1 if max_levels is None else min(top + 1, int(max_levels))
    levels = tuple(energy_level(params, n) for n in range(count))
    return DiscreteSpectrum(
        params=params,
        levels=levels,
        n_max=top,
        continuum_threshold=continuum_threshold(params),
        countable=params.lam <= 0,
    )


def _power_of_q(params: ModelParameters, x, p: float):
    # (1 + lam w^2 x^2)^p through log1p: p is O(m/(lam w)) and large near lam = 0
    return np.exp(p * np.log1p(params.kappa2 * np.square(x)))


def wavefunction_value(params: ModelParameters, level: QuantumLevel, x):
    """Unnormalised bound-state mode function, positive (or rising) at x = 0+."""
    x = np.asarray(x, dtype=float)
    check_in_domain(params, x)
    xs = x if level.s else np.ones_like(x)
    if params.lam == 0:
        z = params.mass * params.omega * x * x
        out = np.exp(-0.5 * z) * xs * special.hyp1f1_polynomial(level.nprime, 2 * level.s + 0.5, z)
    else:
        p, s, k = level.p, level.s, level.nprime
        y = -params.kappa2 * x * x
        poly = special.hyp2f1_polynomial(k, 2 * p + 2 * s + k, 2 * s + 0.5, y)
        out = _power_of_q(params, x, p) * xs * poly
    return float(out) if out.ndim == 0 else out


def scattering_state_value(params: ModelParameters, energy: float, s: float, x):
    """Real, non-normalisable continuum solution for lam > 0 and E above threshold."""
    if params.lam <= 0:
        raise InvalidParameters("continuum states exist only for lambda > 0")
    if s not in (0, 0.5):
        raise ValueError("s must be 0 or 1/2")
    thr = continuum_threshold(params)
    sp = spectral_parameters(params, energy)
    if not energy > thr or sp.nu >= 0:
        raise BelowContinuum(f"E = {energy} is not above the continuum threshold {thr}")
    alpha = sp.p_minus + s
    kappa = math.sqrt(-sp.nu)
    c = 2 * s + 0.5
    x = np.asarray(x, dtype=float)
    y = -params.kappa2 * x * x
    f = np.empty_like(y)
    near = np.abs(y) < 0.5
    if np.any(near):
        f[near] = special.conjugate_pair_series(alpha, kappa, c, y[near])
    a, b = complex(alpha, -kappa), complex(alpha, kappa)
    for idx in zip(*np.nonzero(~near)):
        f[idx] = special.hyp2f1(a, b, c, float(y[idx])).value
    xs = x if s else np.ones_like(x)
    out = _power_of_q(params, x, sp.p_minus) * xs * f
    return float(out) if out.ndim == 0 else out


def nr_limit_wavefunction(params: ModelParameters, n: int, x):
    """exp(-m w x^2 / 2) H_n(sqrt(m w) x), the common lam -> 0 limit."""
    x = np.asarray(x, dtype=float)
    mw = params.mass * params.omega
    out = np.exp(-0.5 * mw * x * x) * special.hermite(n, math.sqrt(mw) * x)
    return float(out) if np.ndim(out) == 0 else out
