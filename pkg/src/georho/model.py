"""The one-parameter family of static (1+1) metrics.

    ds^2 = g00 dt^2 + g11 dx^2

    g00 =  (1 + (1+lam) w^2 x^2) / (1 + lam w^2 x^2)
    g11 = -(1 + (1+lam) w^2 x^2) / (1 + lam w^2 x^2)^2

lam = -1 is the anti-de Sitter oscillator, lam = 0 a conformally flat model.
g11 is kept signed (negative on the physical domain).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameters, OutsideDomain


@dataclass(frozen=True)
class ModelParameters:
    lam: float
    omega: float
    mass: float

    @property
    def kappa2(self) -> float:
        """lam * omega^2, the coefficient that appears in every x-dependent factor."""
        return self.lam * self.omega * self.omega


@dataclass(frozen=True)
class MetricComponents:
    g00: float
    g11: float


@dataclass(frozen=True)
class SpatialDomain:
    radius: float

    @property
    def bounds(self) -> tuple[float, float]:
        return (-self.radius, self.radius)

    def contains(self, x) -> bool:
        return bool(np.all(np.abs(x) < self.radius))


def validate(lam, omega, mass) -> ModelParameters:
    try:
        lam, omega, mass = float(lam), float(omega), float(mass)
    except (TypeError, ValueError) as exc:
        raise InvalidParameters(f"non-numeric model parameter: {exc}") from None
    for name, val in (("lambda", lam), ("omega", omega), ("mass", mass)):
        if not math.isfinite(val):
            raise InvalidParameters(f"{name} must be finite, got {val}")
    if omega <= 0:
        raise InvalidParameters(f"omega must be > 0, got {omega}")
    if mass <= 0:
        raise InvalidParameters(f"mass must be > 0, got {mass}")
    return ModelParameters(lam, omega, mass)


def horizon_radius(params: ModelParameters) -> float:
    if params.lam >= 0:
        return math.inf
    return 1.0 / (params.omega * math.sqrt(-params.lam))


def spatial_domain(params: ModelParameters) -> SpatialDomain:
    return SpatialDomain(horizon_radius(params))


def check_in_domain(params: ModelParameters, x) -> None:
    r = horizon_radius(params)
    if not np.all(np.abs(np.asarray(x, dtype=float)) < r):
        raise OutsideDomain(f"x must satisfy |x| < {r}")


def conformal_factor(params: ModelParameters, x):
    """1 + lam w^2 x^2; vanishes at the horizon when lam < 0."""
    return 1.0 + params.kappa2 * np.square(x)


def metric_components(params: ModelParameters, x: float) -> MetricComponents:
    check_in_domain(params, x)
    g00, g11 = metric_arrays(params, x)
    return MetricComponents(float(g00), float(g11))


def metric_arrays(params: ModelParameters, x):
    """Vectorised (g00, g11) without the domain check."""
    w2x2 = params.omega**2 * np.square(x)
    q = 1.0 + params.lam * w2x2
    num = 1.0 + (1.0 + params.lam) * w2x2
    return num / q, -num / (q * q)


def metric_derivatives(params: ModelParameters, x):
    """Analytic d(g00)/dx and d(g11)/dx."""
    w2 = params.omega**2
    lam = params.lam
    q = 1.0 + lam * w2 * x * x
    num = 1.0 + (1.0 + lam) * w2 * x * x
    dq = 2.0 * lam * w2 * x
    dnum = 2.0 * (1.0 + lam) * w2 * x
    dg00 = (dnum * q - num * dq) / (q * q)
    dg11 = -(dnum * q - 2.0 * num * dq) / (q * q * q)
    return dg00, dg11
