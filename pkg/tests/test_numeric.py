import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from georho import analytic, numeric
from georho.errors import GridTooCoarse, NotNormalizable, QuadratureNotConverged
from georho.model import validate
from georho.special import hermite


def _rel_err(params, k):
    spec = analytic.discrete_spectrum(params, k)
    k = min(k, len(spec))
    num = numeric.sturm_liouville_eigen(params, k)
    exact = spec.energies[:k]
    return np.abs(num.energies - exact) / exact, num


@pytest.mark.parametrize(
    "lam,mass",
    [(-1.0, 1.0), (-1.0, 2.0), (-0.5, 2.0), (0.0, 2.0), (0.5, 2.0), (1.0, 2.0),
     (-2.0, 0.3), (-1.0, 1000.0), (-1e-4, 2.0), (1e-4, 2.0), (1.0, 0.1), (3.0, 0.5)],
)
def test_oracle_reproduces_closed_form(lam, mass):
    rel, num = _rel_err(validate(lam, 1.0, mass), 5)
    assert np.all(rel < 1e-8)
    # the Richardson estimate is an honest upper bound here
    assert np.all(rel <= 10 * num.estimated_error + 1e-12)


def test_oracle_counts_bound_states():
    p = validate(1.0, 1.0, 2.0)
    with pytest.raises(NotNormalizable):
        numeric.sturm_liouville_eigen(p, 3)
    with pytest.raises(ValueError):
        numeric.sturm_liouville_eigen(p, 0)


def test_grid_too_coarse_is_reported():
    p = validate(-1.0, 1.0, 1.0)
    grid = numeric.GridSpec(64, numeric.liouville_extent(p), "theta")
    with pytest.raises(GridTooCoarse):
        numeric.sturm_liouville_eigen(p, 12, grid=grid, tol=1e-13, max_refinements=0)


@pytest.mark.parametrize("lam,mass", [(0.0, 1.0), (-1.0, 2.0)])
def test_plain_differences_converge_at_second_order(lam, mass):
    p = validate(lam, 1.0, mass)
    exact = analytic.discrete_spectrum(p, 3).energies ** 2
    base = numeric._size_grid(p, 3)
    hs, errs = [], []
    for f in (1, 2, 4, 8):
        g = base.refined(f)
        hs.append(g.spacing)
        errs.append(np.max(np.abs(numeric.fd_eigenvalues(p, g, 3) - exact)))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_boundary_exponent():
    assert numeric.boundary_error_exponent(validate(0.5, 1.0, 1.0)) is None
    # c = m^2 / (lam w)^2 = 1 for AdS with m = w, r = sqrt(5)
    assert numeric.boundary_error_exponent(validate(-1.0, 1.0, 1.0)) == pytest.approx(math.sqrt(5.0))
    assert numeric.error_exponents(validate(-1.0, 1.0, 1.0)) == (2.0, math.sqrt(5.0))
    assert numeric.error_exponents(validate(-1.0, 1.0, 2.0)) == (2.0, 4.0)


def test_richardson_removes_both_terms():
    h = np.array([1.0, 0.5, 0.25])
    vals = 3.0 + 0.7 * h**2 - 0.2 * h**1.3
    best, _ = numeric._richardson(*vals, exponents=(1.3, 2.0))
    assert best == pytest.approx(3.0, rel=1e-14)


@given(st.floats(-2.0, 2.0), st.floats(-0.99, 0.99))
def test_liouville_map_round_trip(lam, frac):
    p = validate(lam, 1.3, 1.0)
    r = 1.0 / (p.omega * math.sqrt(-lam)) if lam < 0 else 5.0
    x = frac * r
    assert numeric.from_liouville(p, numeric.to_liouville(p, x)) == pytest.approx(x, rel=1e-12, abs=1e-14)


def test_potential_limits():
    p = validate(0.5, 1.0, 2.0)
    assert numeric.potential(p, 0.0) == pytest.approx(4.0)
    assert numeric.potential(p, 1e3) == pytest.approx(numeric.asymptotic_potential(p), rel=1e-12)
    assert math.isinf(numeric.asymptotic_potential(validate(-1.0, 1.0, 1.0)))


def test_theta_quadrature_converges_under_doubling():
    p = validate(-1.0, 1.0, 1.0)
    lev = analytic.energy_level(p, 3)
    half = numeric.liouville_extent(p)

    def f(z):
        return lev(numeric.from_liouville(p, z)) ** 2

    a, _, _ = numeric._panel_quadrature(f, -half, half, 64)
    b, _, _ = numeric._panel_quadrature(f, -half, half, 128)
    assert abs(a - b) < 1e-10 * abs(b)


def test_explicit_short_cut_is_rejected():
    p = validate(0.0, 1.0, 1.0)
    lev = analytic.energy_level(p, 0)
    with pytest.raises(QuadratureNotConverged):
        numeric.scalar_product(p, lev, lev, numeric.GridSpec(64, 2.0, "x"))


@pytest.mark.parametrize("lam", [-1.0, 0.0, 0.5, 1.0])
def test_gram_matrix_is_identity(lam):
    p = validate(lam, 1.0, 2.0)
    levels = analytic.discrete_spectrum(p, 4).levels[:4]
    g = numeric.gram_matrix(p, levels)
    assert np.max(np.abs(g - np.eye(len(levels)))) < 1e-8


@pytest.mark.parametrize("lam", [-1.0, -0.5, 0.0, 0.5])
def test_node_counts(lam):
    p = validate(lam, 1.0, 2.0)
    for lev in analytic.discrete_spectrum(p, 4).levels:
        assert numeric.node_count(p, lev) == lev.n


def test_sign_changes_ignores_noise():
    assert numeric.sign_changes(np.array([1.0, 1e-17, -1e-17, 2.0, -1.0])) == 1


def test_eigenvector_sign_convention_matches_modes():
    p = validate(0.0, 1.0, 1.0)
    grid = numeric._size_grid(p, 4)
    _, vecs = numeric.fd_eigenpairs(p, grid, 4)
    x = grid.interior()
    for n in range(4):
        u = analytic.energy_level(p, n)(x)
        assert np.dot(vecs[:, n], u) > 0
        assert grid.spacing * np.sum(vecs[:, n] ** 2) == pytest.approx(1.0, rel=1e-12)


def test_fd_eigenvectors_are_hermite_gaussians():
    p = validate(0.0, 1.0, 1.0)
    grid = numeric._size_grid(p, 6).refined(2)
    _, vecs = numeric.fd_eigenpairs(p, grid, 6)
    x = grid.interior()
    for n in range(6):
        h = np.exp(-x * x / 2) * hermite(n, x)
        ov = abs(np.dot(vecs[:, n], h)) / (np.linalg.norm(vecs[:, n]) * np.linalg.norm(h))
        assert ov > 1 - 1e-8


def test_continuum_norm_diverges():
    p = validate(1.0, 1.0, 2.0)
    report = numeric.norm_divergence_check(p, 3.0, 0.0)
    assert report.verdict == "divergent"
    assert np.all(np.diff(report.norms) > 0)
    # logarithmic growth: increments per decade stay comparable
    inc = report.increments
    assert inc[-1] / inc[-2] > 0.5
    assert numeric.norm_divergence_check(p, 3.0, 0.5).diverges


def test_bound_state_norm_settles():
    p = validate(1.0, 1.0, 2.0)
    for lev in analytic.discrete_spectrum(p).levels:
        assert numeric.norm_divergence_check(p, lev).verdict == "normalizable"


def test_divergence_check_arguments():
    with pytest.raises(ValueError):
        numeric.norm_divergence_check(validate(-1.0, 1.0, 1.0), 3.0)
    with pytest.raises(ValueError):
        numeric.norm_divergence_check(validate(1.0, 1.0, 2.0), 3.0, caps=(10, 5, 100))
    assert numeric.continuum_edge(validate(1.0, 1.0, 2.0)) == pytest.approx(2 * math.sqrt(2))
