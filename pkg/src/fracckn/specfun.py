"""Special functions: complex log-Gamma, Gamma-ratio magnitudes and real 2F1.

All functions are pure.  The heavy lifting is done by the compiled kernel
module when it was built, otherwise by the pure-Python mirror; see
:mod:`fracckn._backend`.

Examples
--------
>>> round(log_gamma(0.5).real, 8)
0.57236494
>>> round(hyp2f1(1, 1, 2, 0.5), 7)
1.3862944
"""
import math

import numpy as np

from ._backend import NAME as BACKEND
from ._backend import kernels as _k
from .errors import OverflowFailure, PoleError

__all__ = [
    "BACKEND",
    "log_gamma",
    "gamma_ratio_sq",
    "hyp2f1",
    "digamma",
    "complex_digamma",
    "lgamma_sign",
    "rgamma",
]

POLE_TOL = 1e-12


def _finite(z):
    if isinstance(z, complex):
        return math.isfinite(z.real) and math.isfinite(z.imag)
    return math.isfinite(z)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Lanczos approximation (g = 7, 9 terms) for Re z >= 1/2, reflection
    formula with an analytic log-sine for Re z < 1/2.

    Raises
    ------
    PoleError
        If ``z`` lies within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    if not _finite(z):
        raise OverflowFailure(f"log_gamma argument not finite: {z!r}")
    out = _k.loggamma(z)
    if not _finite(out):
        raise OverflowFailure(f"log_gamma overflow at z={z!r}")
    return out


def gamma_ratio_sq(a: float, b: float, xi):
    """|Gamma(a + i xi/2)|^2 / |Gamma(b + i xi/2)|^2.

    ``xi`` may be a scalar or an array.  Evaluated in log space so that no
    intermediate overflows for |xi| up to at least 1e6.
    """
    arr = np.asarray(xi, dtype=float)
    if np.any(np.abs(arr) <= POLE_TOL):
        for p in (a, b):
            if p <= 0.5 and abs(p - round(p)) <= POLE_TOL:
                raise PoleError(f"Gamma pole at {p!r} with xi = 0")
    out = _k.gamma_ratio_sq_vec(float(a), float(b), arr)
    if not np.all(np.isfinite(out)):
        raise OverflowFailure("gamma_ratio_sq overflowed")
    if np.ndim(xi) == 0:
        return float(out)
    return out


def hyp2f1(a: float, b: float, c: float, x):
    """Gauss hypergeometric function 2F1(a, b; c; x) for real data, 0 <= x < 1.

    Direct Gauss series for x <= 1/2 and whenever the series is the better
    conditioned route; otherwise the x -> 1-x connection formula, with the
    logarithmic variants when c-a-b is an integer (within 1e-8).  Inside that
    narrow band the result is accurate to roughly 1e-8 relative for x very
    close to 1, elsewhere to about 1e-12.

    Raises
    ------
    ParameterPole
        If ``c`` is a non-positive integer.
    NonConvergence
        If a series misses its tolerance within the term budget.
    """
    if np.ndim(x) == 0:
        out = _k.hyp2f1(float(a), float(b), float(c), float(x))
        if not math.isfinite(out):
            raise OverflowFailure("hyp2f1 overflowed")
        return out
    out = _k.hyp2f1_vec(float(a), float(b), float(c), np.asarray(x, dtype=float))
    if not np.all(np.isfinite(out)):
        raise OverflowFailure("hyp2f1 overflowed")
    return out


def digamma(x: float) -> float:
    """Real digamma function psi(x)."""
    return _k.digamma(float(x))


def complex_digamma(z) -> complex:
    """Complex digamma function psi(z)."""
    return _k.cdigamma(complex(z))


def lgamma_sign(x: float):
    """(sign, log|Gamma(x)|) for real x."""
    return _k.lgamma_sign(float(x))


def rgamma(x: float) -> float:
    """Reciprocal Gamma function for real x (zero at the poles)."""
    return _k.rgamma(float(x))
