"""Real-argument hypergeometric functions and Hermite polynomials.

Only what the oscillator models need: the Gauss function 2F1 for y < 1,
its terminating (polynomial) form, the terminating Kummer function 1F1,
and physicists' Hermite polynomials. Parameters a, b of 2F1 may be a
complex-conjugate pair (continuum states); the argument is always real.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, rgamma

from .errors import SeriesNotConverged

SERIES_TOL = 1e-15
MAX_TERMS = 10_000

# switch points between direct series, Pfaff map and the 1/y expansion
_PFAFF_BELOW = -0.5
_INVERSE_BELOW = -2.0


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool


def _is_nonpositive_int(v) -> bool:
    if isinstance(v, complex):
        if v.imag != 0:
            return False
        v = v.real
    return v <= 0 and float(v).is_integer()


def neumaier_sum(terms, axis=0):
    """Compensated summation along ``axis`` (Neumaier's variant of Kahan)."""
    terms = np.asarray(terms)
    total = np.zeros(terms.shape[:axis] + terms.shape[axis + 1:], dtype=terms.dtype)
    comp = np.zeros_like(total)
    for term in np.moveaxis(terms, axis, 0):
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
    return total + comp


def gauss_series(a, b, c, y, tol: float = SERIES_TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Plain Gauss series sum_k (a)_k (b)_k / ((c)_k k!) y^k, for |y| < 1.

    Works in complex arithmetic when a or b is complex; the value is
    returned as a Python complex in that case.
    """
    if _is_nonpositive_int(c):
        raise ValueError(f"c = {c} is a pole of the Gauss function")
    term = 1.0 + 0.0j if isinstance(a, complex) or isinstance(b, complex) else 1.0
    total = term
    comp = 0.0 * term
    small_run = 0
    for k in range(max_terms):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * y
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        if term == 0:
            return SeriesResult(total + comp, k + 2, True)
        if abs(term) <= tol * abs(total + comp):
            small_run += 1
            if small_run >= 2:
                return SeriesResult(total + comp, k + 2, True)
        else:
            small_run = 0
    return SeriesResult(total + comp, max_terms + 1, False)


def _require(res: SeriesResult, what: str) -> SeriesResult:
    if not res.converged:
        raise SeriesNotConverged(f"{what} did not converge within {MAX_TERMS} terms")
    return res


def hyp2f1(a, b, c, y: float) -> SeriesResult:
    """Gauss hypergeometric function F(a, b; c; y) for real y < 1.

    -0.5 <= y < 1      direct series
    -2   <= y < -0.5   Pfaff map y -> y/(y-1), series in (1/3, 2/3]
    y < -2             expansion in 1/y (needs a - b not an integer),
                       else the Pfaff map with a larger term budget

    Conjugate-pair parameters (a = conj(b)) give a real value; the
    imaginary rounding residue is dropped.
    """
    y = float(y)
    if _is_nonpositive_int(c):
        raise ValueError(f"c = {c} is a pole of the Gauss function")
    if y >= 1.0:
        raise ValueError("hyp2f1 is only provided for y < 1")
    if y == 0.0:
        return SeriesResult(1.0, 1, True)
    if y >= _PFAFF_BELOW:
        res = _require(gauss_series(a, b, c, y), "2F1 series")
    elif y >= _INVERSE_BELOW or _is_nonpositive_int(a) or _is_nonpositive_int(b) or _is_integer_gap(a, b):
        res = _pfaff(a, b, c, y)
    else:
        res = _inverse_argument(a, b, c, y)
    return SeriesResult(_as_real(res.value), res.terms_used, res.converged)


def _is_integer_gap(a, b) -> bool:
    d = complex(a) - complex(b)
    return d.imag == 0 and d.real.is_integer()


def _as_real(v):
    if isinstance(v, complex):
        return v.real
    return float(v)


def _pfaff(a, b, c, y) -> SeriesResult:
    # Put a terminating parameter in front so the transformed series is finite;
    # otherwise use the b-form (1-y)^(-b) F(b, c-a; c; t).
    t = y / (y - 1.0)
    if _is_nonpositive_int(a):
        lead, other = a, b
    else:
        lead, other = b, a
    res = _require(gauss_series(lead, c - other, c, t, max_terms=MAX_TERMS), "Pfaff-transformed 2F1 series")
    pref = (1.0 - y) ** (-lead) if not isinstance(lead, complex) else cmath.exp(-lead * math.log1p(-y))
    return SeriesResult(pref * res.value, res.terms_used, True)


def _inverse_argument(a, b, c, y) -> SeriesResult:
    # F(a,b;c;y) = G(c)G(b-a)/(G(b)G(c-a)) (-y)^-a F(a, a-c+1; a-b+1; 1/y) + (a <-> b)
    a, b, c = complex(a), complex(b), complex(c)
    logmy = math.log(-y)
    z = 1.0 / y
    r1 = _require(gauss_series(a, a - c + 1, a - b + 1, z), "1/y series")
    r2 = _require(gauss_series(b, b - c + 1, b - a + 1, z), "1/y series")
    g_c = gamma(c)
    c1 = g_c * gamma(b - a) * rgamma(b) * rgamma(c - a)
    c2 = g_c * gamma(a - b) * rgamma(a) * rgamma(c - b)
    value = c1 * cmath.exp(-a * logmy) * r1.value + c2 * cmath.exp(-b * logmy) * r2.value
    return SeriesResult(complex(value), r1.terms_used + r2.terms_used, True)


def conjugate_pair_series(alpha: float, kappa: float, c: float, y, tol: float = SERIES_TOL,
                          max_terms: int = MAX_TERMS):
    """F(alpha - i kappa, alpha + i kappa; c; y) summed in real arithmetic, |y| < 1.

    (a)_k (b)_k = prod_j ((alpha + j)^2 + kappa^2), so every coefficient is real.
    Vectorised over y.
    """
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= 1.0):
        raise ValueError("conjugate_pair_series needs |y| < 1")
    term = np.ones_like(y)
    total = np.ones_like(y)
    comp = np.zeros_like(y)
    for k in range(max_terms):
        term = term * (((alpha + k) ** 2 + kappa**2) / ((c + k) * (k + 1))) * y
        t = total + term
        comp += np.where(np.abs(total) >= np.abs(term), (total - t) + term, (term - t) + total)
        total = t
        if np.all(np.abs(term) <= tol * np.abs(total + comp)):
            return total + comp
    raise SeriesNotConverged("conjugate-pair series did not converge")


def _poly_terms(nprime: int, b, c, y):
    y = np.asarray(y, dtype=float)
    terms = np.empty((nprime + 1,) + y.shape)
    terms[0] = 1.0
    for k in range(nprime):
        # y enters every step, so huge b with tiny y never overflows
        terms[k + 1] = terms[k] * ((-nprime + k) * (b + k) / ((c + k) * (k + 1)) * y)
    return terms


def hyp2f1_polynomial(nprime: int, b, c, y):
    """Terminating F(-n', b; c; y) as an exact (n'+1)-term sum, any real y."""
    nprime = int(nprime)
    if nprime < 0:
        raise ValueError("n' must be a non-negative integer")
    if any(_is_nonpositive_int(c + k) for k in range(nprime)):
        raise ValueError(f"c = {c} hits a pole before the series terminates")
    out = neumaier_sum(_poly_terms(nprime, b, c, y))
    return float(out) if np.ndim(out) == 0 else out


def hyp1f1_polynomial(nprime: int, c, z):
    """Terminating Kummer function 1F1(-n'; c; z)."""
    nprime = int(nprime)
    if nprime < 0:
        raise ValueError("n' must be a non-negative integer")
    z = np.asarray(z, dtype=float)
    terms = np.empty((nprime + 1,) + z.shape)
    terms[0] = 1.0
    for k in range(nprime):
        terms[k + 1] = terms[k] * ((-nprime + k) / ((c + k) * (k + 1)) * z)
    out = neumaier_sum(terms)
    return float(out) if np.ndim(out) == 0 else out


def hermite(n: int, z):
    """Physicists' Hermite polynomial via H_{k+1} = 2z H_k - 2k H_{k-1}."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    z = np.asarray(z, dtype=float)
    h_prev = np.ones_like(z)
    if n == 0:
        return float(h_prev) if z.ndim == 0 else h_prev
    h = 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return float(h) if z.ndim == 0 else h


def hermite_coefficients(n: int) -> list[int]:
    """Exact integer coefficients of H_n, lowest power first."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return prev
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return cur
