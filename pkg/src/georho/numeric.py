"""Numerical oracles for the quantum models.

Everything here works in the Liouville coordinate

    z(x) = integral_0^x dx' / sqrt(1 + lam w^2 x'^2)

  lam < 0 :  z = R arcsin(x / R)                (angular compactification, |z| < pi R / 2)
  lam = 0 :  z = x
  lam > 0 :  z = asinh(w sqrt(lam) x) / (w sqrt(lam))

The self-adjoint form (sqrt(q) U')' + (E^2 - V) U / sqrt(q) = 0, q = 1 + lam w^2 x^2,
has p w = 1, so in z it becomes exactly

    -U_zz + V U = E^2 U,        V = m^2 (1 + w^2 x^2 / q),

and the scalar product weight dx / sqrt(q) becomes dz. The finite-difference
operator is therefore a plain symmetric tridiagonal matrix, and the quadrature
is unweighted Gauss-Legendre in z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .analytic import QuantumLevel, continuum_threshold, scattering_state_value
from .errors import GridTooCoarse, NotNormalizable, QuadratureNotConverged
from .model import ModelParameters, horizon_radius, validate

MIN_POINTS = 64
TAIL_TOL = 1e-12
GL_ORDER = 20


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``points`` intervals on (-half_width, half_width) in z.

    Dirichlet conditions at both ends; the end nodes are never evaluated.
    """

    points: int
    half_width: float
    coordinate: str
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.points < MIN_POINTS:
            raise ValueError(f"grid needs at least {MIN_POINTS} points")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    def interior(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(1, self.points)

    def refined(self, factor: int = 2) -> "GridSpec":
        return replace(self, points=self.points * factor)


@dataclass(frozen=True)
class NumericalSpectrum:
    energies: np.ndarray
    energies_squared: np.ndarray
    grid: GridSpec
    estimated_error: np.ndarray
    raw_squared: tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class GrowthReport:
    caps: tuple[float, ...]
    norms: tuple[float, ...]
    verdict: str

    @property
    def diverges(self) -> bool:
        return self.verdict == "divergent"

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.norms)


class NormalizedMode:
    """U / sqrt(<U, U>) as a callable of x."""

    def __init__(self, func: Callable, norm_factor: float, parity: int | None = None):
        self.func = func
        self.norm_factor = norm_factor
        self.parity = parity

    def __call__(self, x):
        return self.norm_factor * self.func(x)


# --- coordinates ---------------------------------------------------------------

def coordinate_name(params: ModelParameters) -> str:
    if params.lam < 0:
        return "theta"
    return "x" if params.lam == 0 else "asinh"


def _curv(params: ModelParameters) -> float:
    return params.omega * math.sqrt(abs(params.lam))


def to_liouville(params: ModelParameters, x):
    x = np.asarray(x, dtype=float)
    if params.lam < 0:
        r = horizon_radius(params)
        return r * np.arcsin(x / r)
    if params.lam == 0:
        return x
    k = _curv(params)
    return np.arcsinh(k * x) / k


def from_liouville(params: ModelParameters, z):
    z = np.asarray(z, dtype=float)
    if params.lam < 0:
        r = horizon_radius(params)
        return r * np.sin(z / r)
    if params.lam == 0:
        return z
    k = _curv(params)
    return np.sinh(k * z) / k


def liouville_extent(params: ModelParameters) -> float:
    """Half-width of the full domain in z (finite only for lam < 0)."""
    if params.lam < 0:
        return 0.5 * math.pi * horizon_radius(params)
    return math.inf


def potential(params: ModelParameters, z):
    """V(z) = m^2 (1 + w^2 x^2 / q), with q formed without cancellation."""
    z = np.asarray(z, dtype=float)
    m2 = params.mass**2
    if params.lam == 0:
        return m2 * (1.0 + (params.omega * z) ** 2)
    k = _curv(params)
    if params.lam < 0:
        ratio = np.tan(k * z) ** 2 / -params.lam
    else:
        ratio = np.tanh(k * z) ** 2 / params.lam
    return m2 * (1.0 + ratio)


def asymptotic_potential(params: ModelParameters) -> float:
    """lim V(z) for |z| -> infinity; finite only for lam > 0."""
    if params.lam > 0:
        return params.mass**2 * (1.0 + 1.0 / params.lam)
    return math.inf


# --- grids ---------------------------------------------------------------------

def _resolution(params: ModelParameters, e2_max: float) -> float:
    """Target spacing from the local wavelength and the scales on which V varies."""
    m, w = params.mass, params.omega
    k_wave = math.sqrt(max(e2_max - m * m, m * w))
    scales = [2.0 * math.pi / k_wave, 1.0 / math.sqrt(m * w)]
    if params.lam != 0:
        scales.append(1.0 / _curv(params))
    return min(scales) / 60.0


def _bound_half_width(params: ModelParameters, e2: float) -> float:
    """Half-width beyond which a bound state with E^2 = e2 has decayed below 1e-12 squared."""
    m, w = params.mass, params.omega
    if params.lam == 0:
        a_cl = math.sqrt(max(e2 - m * m, 0.0)) / (m * w)
        return a_cl + 8.0 / math.sqrt(m * w)
    vinf = asymptotic_potential(params)
    kappa = math.sqrt(max(vinf - e2, 1e-300))
    k = _curv(params)
    arg = math.sqrt(max(params.lam * (e2 / (m * m) - 1.0), 0.0))
    z_turn = math.atanh(min(arg, 1.0 - 1e-16)) / k
    # near the centre the decay is Gaussian on the oscillator length, further out e^(-kappa z)
    return z_turn + max(20.0 / kappa, 8.0 / math.sqrt(m * w))


def default_grid(params: ModelParameters, e2_max: float, points: int | None = None) -> GridSpec:
    """A grid adequate for bound states up to E^2 = e2_max."""
    if params.lam < 0:
        # V in theta dominates the flat oscillator potential, so the flat box is safe;
        # cutting there keeps the horizon's enormous V out of the matrix
        flat = _bound_half_width(validate(0.0, params.omega, params.mass), e2_max)
        half = min(liouville_extent(params), flat)
    else:
        half = _bound_half_width(params, e2_max)
    if points is None:
        points = max(MIN_POINTS, int(math.ceil(2.0 * half / _resolution(params, e2_max))))
    return GridSpec(int(points), half, coordinate_name(params))


# --- finite-difference eigensolver ------------------------------------------------

def fd_operator(params: ModelParameters, grid: GridSpec):
    """Diagonal and off-diagonal of the symmetric second-order operator -d2/dz2 + V."""
    z = grid.interior()
    h = grid.spacing
    diag = 2.0 / (h * h) + potential(params, z)
    off = np.full(z.size - 1, -1.0 / (h * h))
    return diag, off


def fd_eigenvalues(params: ModelParameters, grid: GridSpec, k: int) -> np.ndarray:
    """Lowest k eigenvalues E^2 of the discretised problem (no extrapolation)."""
    diag, off = fd_operator(params, grid)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, k - 1))


def fd_eigenpairs(params: ModelParameters, grid: GridSpec, k: int):
    """(E^2, vectors) with h * sum(v^2) = 1.

    Signs follow the analytic convention: the j-th vector is positive at the
    centre for even j and rising through the centre for odd j.
    """
    diag, off = fd_operator(params, grid)
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    vecs = vecs / math.sqrt(grid.spacing)
    z = grid.interior()
    c = int(np.argmin(np.abs(z)))
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        lead = col[c] if j % 2 == 0 else col[c + 1] - col[c - 1]
        if lead < 0:
            vecs[:, j] = -col
    return vals, vecs


def count_below(params: ModelParameters, grid: GridSpec, level: float) -> int:
    """Number of discrete eigenvalues E^2 strictly below ``level``."""
    diag, off = fd_operator(params, grid)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="v", select_range=(-np.inf, level))
    return int(np.count_nonzero(vals < level))


def boundary_error_exponent(params: ModelParameters) -> float | None:
    """Exponent r of the h^r error term caused by the horizon singularity (lam < 0).

    Near z = +-pi R / 2 the potential behaves as c / d^2 with c = m^2 / (lam w)^2,
    so U ~ d^beta with beta (beta - 1) = c. Second-order differences then carry an
    extra error term of order h^(2 beta - 1) = h^sqrt(1 + 4c).
    """
    if params.lam >= 0:
        return None
    c = (params.mass / (params.lam * params.omega)) ** 2
    return math.sqrt(1.0 + 4.0 * c)


def error_exponents(params: ModelParameters, grid: GridSpec | None = None) -> tuple[float, float]:
    r = boundary_error_exponent(params)
    if grid is not None and r is not None and grid.half_width < liouville_extent(params):
        r = None
    if r is None or r >= 4.0 or abs(r - 2.0) < 0.05:
        return 2.0, 4.0
    return tuple(sorted((2.0, r)))


def _richardson(e1, e2, e3, exponents=(2.0, 4.0)):
    """Eliminate two error terms h^q1, h^q2 from results on h, h/2, h/4."""
    q1, q2 = exponents
    f1, f2 = 2.0**q1, 2.0**q2
    r12 = (f1 * e2 - e1) / (f1 - 1.0)
    r23 = (f1 * e3 - e2) / (f1 - 1.0)
    best = (f2 * r23 - r12) / (f2 - 1.0)
    return best, np.abs(best - r23)


def _size_grid(params: ModelParameters, k: int) -> GridSpec:
    """Grid for the lowest k levels (lam <= 0), sized from a coarse preliminary solve."""
    m, w = params.mass, params.omega
    if params.lam < 0:
        extent = liouville_extent(params)
        points = max(MIN_POINTS, 100 * (k + 1), int(20.0 * extent * math.sqrt(m * w)))
        e2 = float(fd_eigenvalues(params, GridSpec(points, extent, "theta"), k)[-1])
        return default_grid(params, 1.1 * e2)
    half = 8.0 / math.sqrt(m * w)
    for _ in range(20):
        coarse = GridSpec(max(MIN_POINTS, 100 * (k + 1)), half, "x")
        e2 = 1.1 * float(fd_eigenvalues(params, coarse, k)[-1])
        need = _bound_half_width(params, e2)
        if half >= need:
            return default_grid(params, e2)
        half = need
    raise GridTooCoarse("box size did not settle")


MAX_POINTS = 2_000_000


def _bound_levels(params: ModelParameters, grid: GridSpec, k: int) -> np.ndarray:
    vals = fd_eigenvalues(params, grid, k)
    return vals[vals < asymptotic_potential(params)]


def _grow_box(params: ModelParameters, k: int) -> GridSpec:
    """Box for the lowest k levels with lam > 0.

    The box and spacing follow the highest bound level found so far. When
    fewer than k levels lie below V(infinity) the box is widened until that
    count survives two further doublings; the caller then reports the shortfall.
    """
    m, w = params.mass, params.omega
    vinf = asymptotic_potential(params)
    half = 8.0 / math.sqrt(m * w)
    e2_top = min(vinf, m * m + 2.0 * m * w * (k + 1))
    stable = 0
    prev = None
    for _ in range(60):
        h = _resolution(params, e2_top)
        points = max(MIN_POINTS, int(math.ceil(2.0 * half / h)))
        if points > MAX_POINTS:
            if prev is not None and stable >= 1:
                # shortfall already confirmed once; a wider box is out of reach
                return grid
            break
        grid = GridSpec(points, half, "asinh")
        bound = _bound_levels(params, grid, k)
        if bound.size == 0:
            half *= 2.0
            continue
        top = float(bound[-1])
        need = _bound_half_width(params, top)
        if bound.size < k:
            stable = stable + 1 if bound.size == prev and half >= need else 0
            if stable >= 2:
                return grid
            prev = bound.size
            half = max(2.0 * half, min(need, 4.0 * half))
            e2_top = max(e2_top, top)
            continue
        if half >= need and _resolution(params, top) >= 0.999 * h:
            return grid
        # a level just below V(infinity) looks far too extended until the box is big
        # enough for it to sink, so grow in bounded steps
        half = max(half, min(need, 4.0 * half))
        e2_top = top
    raise GridTooCoarse("could not find a box that contains the bound states")


def sturm_liouville_eigen(
    params: ModelParameters,
    k: int,
    grid: GridSpec | None = None,
    tol: float = 1e-7,
    max_refinements: int = 4,
) -> NumericalSpectrum:
    """Lowest k levels of the Klein-Gordon problem by finite differences.

    Solves on N, 2N and 4N intervals and applies two Richardson steps
    (h^2 and h^4, or h^r for the horizon term when lam < 0). For lam > 0 only eigenvalues below the continuum edge
    count as bound; asking for more raises NotNormalizable.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if grid is None:
        grid = _grow_box(params, k) if params.lam > 0 else _size_grid(params, k)
    vinf = asymptotic_potential(params)
    if math.isfinite(vinf):
        available = _bound_levels(params, grid.refined(4), k).size
        if k > available:
            raise NotNormalizable(f"only {available} bound states below the continuum edge {math.sqrt(vinf)}")

    previous = None
    for _ in range(max_refinements + 1):
        grids = (grid, grid.refined(2), grid.refined(4))
        raw = tuple(fd_eigenvalues(params, g, k) for g in grids)
        best, err = _richardson(*raw, exponents=error_exponents(params, grid))
        if previous is not None:
            # successive extrapolants; far sharper than |best - r23| when the
            # singular boundary term dominates
            err = np.minimum(err, np.abs(best - previous))
        previous = best
        # the tridiagonal solver is accurate to ~eps * ||A|| in absolute terms, and the
        # extrapolation weights amplify that a few times
        diag, _ = fd_operator(params, grids[2])
        err = np.maximum(err, 16.0 * np.finfo(float).eps * (float(np.max(np.abs(diag))) + 2.0 / grids[2].spacing**2))
        rel = err / np.abs(best)
        if np.all(rel < tol):
            return NumericalSpectrum(np.sqrt(best), best, grid, 0.5 * rel, raw)
        grid = grid.refined(2)
    raise GridTooCoarse(f"Richardson error estimate {rel.max():.2e} above tolerance {tol:.1e}")


# --- quadrature ----------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


def _panel_quadrature(f_of_z: Callable, lo: float, hi: float, panels: int):
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    z = (mid + half * _GL_NODES[None, :]).ravel()
    w = (half * _GL_WEIGHTS[None, :]).ravel()
    vals = f_of_z(z)
    return float(np.sum(w * vals)), float(np.sum(w * np.abs(vals))), vals


def integrate_z(f_of_z: Callable, lo: float, hi: float, tol: float = TAIL_TOL, start_panels: int = 16,
                max_panels: int = 1 << 14) -> float:
    """Gauss-Legendre panels, doubled until two successive sums agree to tol * integral of |f|."""
    panels = start_panels
    old, _, _ = _panel_quadrature(f_of_z, lo, hi, panels)
    while panels < max_panels:
        panels *= 2
        new, scale, _ = _panel_quadrature(f_of_z, lo, hi, panels)
        if abs(new - old) <= tol * max(scale, np.finfo(float).tiny):
            return new
        old = new
    raise QuadratureNotConverged(f"no agreement to {tol} after {panels} panels")


def _tail_ok(vals: np.ndarray) -> bool:
    peak = np.max(np.abs(vals))
    if peak == 0:
        return True
    edge = max(abs(vals[0]), abs(vals[-1]))
    return edge <= TAIL_TOL * peak


def scalar_product(params: ModelParameters, u: Callable, v: Callable, grid: GridSpec | None = None,
                   tol: float = TAIL_TOL) -> float:
    """<u, v> = integral over D of u v dx / sqrt(1 + lam w^2 x^2), evaluated as integral of u v dz.

    For lam >= 0 the range is truncated at grid.half_width (in z). Without a
    grid the truncation is widened until the integrand at the cut is below
    1e-12 of its peak; an explicit grid that violates this raises.
    """
    def f(z):
        x = from_liouville(params, z)
        return u(x) * v(x)

    if params.lam < 0:
        half = liouville_extent(params)
        return integrate_z(f, -half, half, tol)

    half = grid.half_width if grid is not None else 4.0 / math.sqrt(params.mass * params.omega)
    for _ in range(60):
        _, _, vals = _panel_quadrature(f, -half, half, 64)
        if _tail_ok(vals):
            return integrate_z(f, -half, half, tol)
        if grid is not None:
            raise QuadratureNotConverged(f"integrand at the cut z = {half} exceeds {TAIL_TOL} of its peak")
        half *= 1.5
    raise QuadratureNotConverged("integrand does not decay; the state is not normalisable")


def normalize(params: ModelParameters, level, grid: GridSpec | None = None) -> tuple[NormalizedMode, float]:
    """Return the unit-norm mode and the factor N that produced it."""
    if isinstance(level, QuantumLevel):
        func, parity = level, level.parity
    else:
        func, parity = level, getattr(level, "parity", None)
    norm2 = scalar_product(params, func, func, grid)
    if not norm2 > 0 or not math.isfinite(norm2):
        raise NotNormalizable("state has no finite positive norm")
    n_fac = 1.0 / math.sqrt(norm2)
    return NormalizedMode(func, n_fac, parity), n_fac


def gram_matrix(params: ModelParameters, modes, grid: GridSpec | None = None) -> np.ndarray:
    """G_ij = <U_i, U_j>; levels are normalised first, other callables are used as given."""
    funcs = [normalize(params, m, grid)[0] if isinstance(m, QuantumLevel) else m for m in modes]
    n = len(funcs)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = scalar_product(params, funcs[i], funcs[j], grid)
    return g


# --- structure checks -----------------------------------------------------------

def sign_changes(values: np.ndarray, floor: float = 1e-12) -> int:
    """Strict sign changes, skipping samples below floor * max|values|."""
    values = np.asarray(values, dtype=float)
    keep = np.abs(values) > floor * np.max(np.abs(values))
    signs = np.sign(values[keep])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def node_grid(params: ModelParameters, level: QuantumLevel, points: int = 4096) -> GridSpec:
    return default_grid(params, level.energy**2, points=points)


def node_count(params: ModelParameters, level, grid: GridSpec | None = None) -> int:
    """Nodes of the analytic mode function on the open interior of D."""
    if grid is None:
        grid = node_grid(params, level)
    x = from_liouville(params, grid.interior())
    coarse = sign_changes(level(x))
    fine = sign_changes(level(from_liouville(params, grid.refined(2).interior())))
    if coarse != fine:
        raise GridTooCoarse(f"node count changes under refinement ({coarse} -> {fine})")
    return coarse


def _mode_norm_to(params: ModelParameters, func: Callable, cap: float) -> float:
    zc = float(to_liouville(params, cap))

    def f(z):
        return np.square(func(from_liouville(params, z)))

    return 2.0 * integrate_z(f, 0.0, zc, tol=1e-10, start_panels=max(16, int(zc * 4)))


def norm_divergence_check(
    params: ModelParameters,
    state,
    s: float = 0.0,
    caps=(10.0, 100.0, 1000.0),
    max_cap: float = 1e8,
    growth_ratio: float = 0.5,
    decay_ratio: float = 0.25,
) -> GrowthReport:
    """Truncated norms integral_{-L}^{L} |U|^2 dx / sqrt(q) for growing L.

    ``state`` is either a continuum energy (with ``s``) or any callable mode
    such as a bound QuantumLevel. Caps are expected to grow geometrically.
    Continuum modes grow logarithmically in L, so successive increments stay
    comparable (ratio >= growth_ratio): divergent. A normalisable tail makes
    them shrink geometrically (two ratios below decay_ratio): normalizable.
    Anything in between extends the caps by decades up to max_cap.
    """
    if params.lam <= 0:
        raise ValueError("the continuum exists only for lambda > 0")
    if callable(state):
        func = state
    else:
        energy = float(state)

        def func(x):
            return scattering_state_value(params, energy, s, x)

    caps = [float(c) for c in caps]
    if len(caps) < 3 or any(b <= a for a, b in zip(caps, caps[1:])):
        raise ValueError("need at least three strictly increasing caps")
    norms = [_mode_norm_to(params, func, c) for c in caps]
    while True:
        inc = np.diff(norms)
        ratios = inc[1:] / np.where(inc[:-1] > 0, inc[:-1], np.inf)
        if np.all(inc > 0) and ratios[-1] >= growth_ratio:
            verdict = "divergent"
            break
        if inc[-1] <= 1e-14 * norms[-1] or (ratios.size >= 2 and np.all(ratios[-2:] < decay_ratio)):
            verdict = "normalizable"
            break
        if caps[-1] * 10.0 > max_cap:
            verdict = "undecided"
            break
        caps.append(caps[-1] * 10.0)
        norms.append(_mode_norm_to(params, func, caps[-1]))
    return GrowthReport(tuple(caps), tuple(norms), verdict)


def continuum_edge(params: ModelParameters) -> float | None:
    return continuum_threshold(params)
