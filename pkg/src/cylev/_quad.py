"""Checked quadrature helpers.

Wraps scipy's adaptive Gauss-Kronrod integrator so that a failure to reach
tolerance raises instead of silently returning a value, and provides an
adaptive Simpson rule for complex-valued time integrals.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate

ABS_TOL = 1e-10
REL_TOL = 1e-9


class QuadratureError(RuntimeError):
    """Raised when an adaptive integration does not reach its tolerance."""


def quad_checked(f, a, b, *, epsabs=ABS_TOL, epsrel=REL_TOL, limit=200,
                 points=None, weight=None, wvar=None, what=""):
    """scipy.integrate.quad with a hard failure on non-convergence."""
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if points is not None and weight is None:
        kwargs["points"] = points
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kwargs)
    value, abserr = out[0], out[1]
    if len(out) > 3:  # quadpack appended an explanation: it gave up
        raise QuadratureError(
            f"quadrature failed{' for ' + what if what else ''}: {out[3]}")
    tol = max(epsabs, epsrel * abs(value))
    if abserr > 10.0 * tol:
        raise QuadratureError(
            f"quadrature error {abserr:.3e} above tolerance {tol:.3e}"
            f"{' for ' + what if what else ''}")
    return value


def fourier_tail(density, omega, kind, a=1.0, *, epsabs=ABS_TOL, what=""):
    """Oscillatory tail integral of ``density`` against cos/sin on [a, inf).

    Computes ``int_a^inf density(x) * cos(omega x) dx`` (or sin).  Requires
    omega > 0; used for the heavy tails of Levy symbol integrals where plain
    adaptive refinement cannot chase the oscillations.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    return quad_checked(density, a, np.inf, weight=kind, wvar=omega,
                        epsabs=epsabs, epsrel=0.0, what=what)


def simpson_adaptive(f, a, b, *, tol=1e-9, max_depth=48, splits=()):
    """Adaptive Simpson integration of a complex-valued scalar function.

    ``splits`` lists interior points (kernel discontinuities or kinks) where
    the interval is cut before refinement starts.
    """
    if b < a:
        raise ValueError("interval reversed")
    if b == a:
        return 0.0 + 0.0j
    cuts = sorted({float(a), float(b), *(s for s in splits if a < s < b)})
    total = 0.0 + 0.0j
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _simpson_piece(f, lo, hi, tol * (hi - lo) / (b - a), max_depth)
    return total


def _simpson_rule(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _simpson_piece(f, a, b, tol, max_depth):
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = _simpson_rule(f, a, b, fa, fm, fb)
    return _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson_rule(f, a, m, fa, flm, fm)
    right = _simpson_rule(f, m, b, fm, frm, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a:.6g}, {b:.6g}]")
    half = 0.5 * tol
    return (_simpson_recurse(f, a, m, fa, flm, fm, left, half, depth - 1)
            + _simpson_recurse(f, m, b, fm, frm, fb, right, half, depth - 1))
