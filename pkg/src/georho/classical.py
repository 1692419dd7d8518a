"""Classical geodesic motion in coordinate time.

Closed-form orbits x(t) = a sin(Omega (t - t0)) together with a direct
numerical integration of the geodesic equation, which serves as an
independent check of the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ForbiddenEnergy, HorizonApproach, IntegrationFailure, OpenMotion
from .model import ModelParameters, check_in_domain, horizon_radius, metric_arrays, metric_derivatives

RTOL = 1e-12
ATOL = 1e-14
HORIZON_GUARD = 1e-8


class MotionClass(str, Enum):
    OSCILLATORY = "oscillatory"
    THRESHOLD = "threshold"
    OPEN = "open"


@dataclass(frozen=True)
class ClassicalOrbit:
    params: ModelParameters
    energy: float
    omega_eff: float
    amplitude: float
    phase_time: float = 0.0
    motion_class: MotionClass = MotionClass.OSCILLATORY

    def position(self, t):
        return trajectory_position(self, t)

    def velocity(self, t):
        return self.amplitude * self.omega_eff * np.cos(self.omega_eff * (np.asarray(t) - self.phase_time))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega_eff if self.omega_eff > 0 else math.inf


@dataclass
class GeodesicPath:
    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    energy: np.ndarray
    energy_drift: float
    terminated_early: bool = False
    samples: list = field(init=False, repr=False)

    def __post_init__(self):
        self.samples = list(zip(self.t.tolist(), self.x.tolist(), self.xdot.tolist()))


def _radicand(params: ModelParameters, energy: float) -> tuple[float, float]:
    """(1+lam) m^2 - lam E^2 and the rounding scale used to decide its sign."""
    m2 = params.mass**2
    e2 = energy * energy
    rad = (1.0 + params.lam) * m2 - params.lam * e2
    scale = 8.0 * np.finfo(float).eps * (abs(1.0 + params.lam) * m2 + abs(params.lam) * e2)
    return rad, scale


def _check_energy(params: ModelParameters, energy: float) -> None:
    if not energy >= params.mass:
        raise ForbiddenEnergy(f"E = {energy} is below the rest energy m = {params.mass}")


def classify_motion(params: ModelParameters, energy: float) -> MotionClass:
    _check_energy(params, energy)
    if params.lam <= 0:
        return MotionClass.OSCILLATORY
    rad, scale = _radicand(params, energy)
    if rad > scale:
        return MotionClass.OSCILLATORY
    if rad >= -scale:
        return MotionClass.THRESHOLD
    return MotionClass.OPEN


def effective_frequency(params: ModelParameters, energy: float) -> float:
    """Omega = (w/E) sqrt((1+lam) m^2 - lam E^2)."""
    motion = classify_motion(params, energy)
    if motion is MotionClass.OPEN:
        raise OpenMotion(f"E = {energy} lies above the oscillation threshold")
    if motion is MotionClass.THRESHOLD:
        return 0.0
    rad, _ = _radicand(params, energy)
    return params.omega / energy * math.sqrt(rad)


def amplitude(params: ModelParameters, energy: float) -> float:
    motion = classify_motion(params, energy)
    if motion is not MotionClass.OSCILLATORY:
        raise OpenMotion(f"E = {energy} has no finite amplitude ({motion.value})")
    rad, _ = _radicand(params, energy)
    return math.sqrt((energy * energy - params.mass**2) / rad) / params.omega


def orbit_from_energy(params: ModelParameters, energy: float, t0: float = 0.0) -> ClassicalOrbit:
    """Closed-form orbit with x(t0) = 0 and non-negative velocity there."""
    motion = classify_motion(params, energy)
    if motion is not MotionClass.OSCILLATORY:
        raise OpenMotion(f"E = {energy} gives {motion.value} motion, not an orbit")
    return ClassicalOrbit(
        params=params,
        energy=float(energy),
        omega_eff=effective_frequency(params, energy),
        amplitude=amplitude(params, energy),
        phase_time=float(t0),
        motion_class=motion,
    )


def trajectory_position(orbit: ClassicalOrbit, t):
    return orbit.amplitude * np.sin(orbit.omega_eff * (np.asarray(t, dtype=float) - orbit.phase_time))


def energy_from_state(params: ModelParameters, x, xdot):
    """Invert the conserved-energy relation: E = m g00 / sqrt(g00 + g11 xdot^2)."""
    check_in_domain(params, x)
    g00, g11 = metric_arrays(params, np.asarray(x, dtype=float))
    denom = g00 + g11 * np.square(xdot)
    if np.any(denom <= 0):
        raise ForbiddenEnergy("state is superluminal in coordinate time; E is not real")
    e = params.mass * g00 / np.sqrt(denom)
    return float(e) if np.ndim(e) == 0 else e


def max_speed(params: ModelParameters, energy: float) -> float:
    """Coordinate speed at x = 0 for the given energy."""
    _check_energy(params, energy)
    return math.sqrt(1.0 - (params.mass / energy) ** 2)


def geodesic_rhs(params: ModelParameters):
    def rhs(_t, y):
        x, v = y
        g00, g11 = metric_arrays(params, x)
        dg00, dg11 = metric_derivatives(params, x)
        acc = dg00 / (2.0 * g11) - v * v * (dg11 / (2.0 * g11) - dg00 / g00)
        return [v, acc]

    return rhs


def integrate_geodesic(
    params: ModelParameters,
    x0: float,
    xdot0: float,
    t_max: float,
    step: float,
    rtol: float = RTOL,
    atol: float = ATOL,
    stop_at_horizon: bool = False,
) -> GeodesicPath:
    """Integrate the geodesic equation with an adaptive Dormand-Prince 5(4) pair.

    ``step`` is the sampling interval of the returned path; the integrator
    chooses its own internal steps. For lam < 0 the run aborts with
    HorizonApproach once |x| exceeds (1 - 1e-8) R, unless ``stop_at_horizon``
    is set, in which case the path is truncated there.
    """
    if step <= 0 or t_max <= 0:
        raise ValueError("step and t_max must be positive")
    e0 = energy_from_state(params, x0, xdot0)
    n = int(math.floor(t_max / step + 1e-9))
    t_eval = np.arange(n + 1) * step

    events = None
    radius = horizon_radius(params)
    if math.isfinite(radius):
        guard = (1.0 - HORIZON_GUARD) * radius

        def near_horizon(_t, y):
            return guard - abs(y[0])

        near_horizon.terminal = True
        events = [near_horizon]

    sol = solve_ivp(
        geodesic_rhs(params),
        (0.0, t_eval[-1]),
        [x0, xdot0],
        method="RK45",
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
        events=events,
    )
    if sol.status == -1:
        raise IntegrationFailure(sol.message)
    hit_horizon = sol.status == 1
    if hit_horizon and not stop_at_horizon:
        raise HorizonApproach(f"trajectory reached |x| > (1 - {HORIZON_GUARD}) R at t = {sol.t_events[0][0]}")

    x, v = sol.y
    energy = np.atleast_1d(energy_from_state(params, x, v))
    drift = float(np.max(np.abs(energy - e0)) / e0) if energy.size else 0.0
    return GeodesicPath(sol.t, x, v, energy, drift, terminated_early=hit_horizon)
