"""Pure-Python scalar kernels: complex log-Gamma, digamma and real 2F1.

This module mirrors ``_kernels.pyx`` line for line and is used whenever the
compiled extension is unavailable.  Public entry points live in
:mod:`fracckn.specfun`; nothing here validates beyond what the algorithms
themselves need.
"""
import cmath
import math

import numpy as np

from .errors import NonConvergence, OverflowFailure, ParameterPole, PoleError

LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)
LOG_2 = math.log(2.0)
POLE_TOL = 1e-12
# near-integer band of c-a-b inside which the log-case formulas are used
INT_BAND = 1e-8
SERIES_BUDGET = 20000
# below this distance the connection formula is avoided when x <= 0.99
NEAR_INT = 1e-4
# Bernoulli terms B_2k/(2k) for the digamma asymptotic series
_PSI_ASYM = (1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132,
             -691.0 / 32760, 1.0 / 12)


def _near_nonpositive_int(x):
    return x <= 0.5 and abs(x - round(x)) <= POLE_TOL


def _loggamma_lanczos(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    x = LANCZOS_COEF[0]
    for k in range(1, 9):
        x += LANCZOS_COEF[k] / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_sin_pi_upper(z):
    # log(sin(pi z)) for Im z >= 0, continuous in the upper half plane
    w = cmath.exp(2j * math.pi * z)
    return -1j * math.pi * z + 0.5j * math.pi - LOG_2 + cmath.log(1.0 - w)


def loggamma(z):
    """Principal branch of log Gamma(z) for complex ``z``."""
    z = complex(z)
    if abs(z.imag) <= POLE_TOL and _near_nonpositive_int(z.real):
        raise PoleError(f"log_gamma pole at z={z!r}")
    if z.real >= 0.5:
        return _loggamma_lanczos(z)
    if z.imag < 0.0:
        return loggamma(z.conjugate()).conjugate()
    # reflection; with log(1 - exp(2 pi i z)) principal the result already
    # sits on the branch fixed by log G(z+1) = log G(z) + log z
    return LOG_PI - _log_sin_pi_upper(z) - _loggamma_lanczos(1.0 - z)


def lgamma_sign(x):
    """Return (sign, log|Gamma(x)|) for real ``x``."""
    if _near_nonpositive_int(x):
        raise PoleError(f"gamma pole at x={x!r}")
    if x > 0.0:
        return 1.0, math.lgamma(x)
    sign = -1.0 if math.floor(x) % 2 else 1.0
    return sign, math.lgamma(x)


def rgamma(x):
    """1/Gamma(x) for real ``x``; zero at the poles and smooth through them.

    For x < 1/2 the reflection 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi is used
    with the sine reduced exactly, so values next to a pole are accurate.
    """
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x < 0.5:
        k = round(x)
        sn = math.sin(math.pi * (x - k))
        if k % 2:
            sn = -sn
        return math.exp(math.lgamma(1.0 - x)) * sn / math.pi
    return math.exp(-math.lgamma(x))


def digamma(x):
    """Real digamma function."""
    if x <= 0.0:
        if x == math.floor(x):
            raise PoleError(f"digamma pole at x={x!r}")
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = 0.0
    p = inv2
    for c in _PSI_ASYM:
        s += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - s


def cdigamma(z):
    """Complex digamma function."""
    z = complex(z)
    if z.real < 0.5:
        if abs(z.imag) <= POLE_TOL and _near_nonpositive_int(z.real):
            raise PoleError(f"digamma pole at z={z!r}")
        return cdigamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0j
    while abs(z) < 10.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    s = 0j
    p = inv2
    for c in _PSI_ASYM:
        s += c * p
        p *= inv2
    return acc + cmath.log(z) - 0.5 / z - s


def _gauss_series(a, b, c, x, budget=SERIES_BUDGET):
    term = 1.0
    total = 1.0
    small = 0
    for n in range(budget):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
        if term == 0.0:
            return total
    raise NonConvergence(
        f"2F1({a}, {b}; {c}; {x}) series missed tolerance in {budget} terms")


def _is_nonpos_int(x):
    return x <= 0.0 and x == math.floor(x)


def _gamma_ratio(num, den):
    # prod Gamma(num) / prod Gamma(den), zero when a denominator hits a pole
    sign = 1.0
    lg = 0.0
    for d in den:
        if _is_nonpos_int(d):
            return 0.0
        s, v = lgamma_sign(d)
        sign *= s
        lg -= v
    for u in num:
        s, v = lgamma_sign(u)
        sign *= s
        lg += v
    if lg > 709.0:
        raise OverflowFailure("Gamma ratio overflows double precision")
    return sign * math.exp(lg)


def _log_tail(a, b, k, shift, y, ly):
    # sum_n (a+shift)_n (b+shift)_n / (n! (n+k)!) y^n
    #       * [ln y - psi(n+1) - psi(n+k+1) + psi(a+n+shift) + psi(b+n+shift)]
    term = 1.0 / math.factorial(k)
    tail = 0.0
    small = 0
    for n in range(SERIES_BUDGET):
        if n > 0:
            term *= (a + shift + n - 1) * (b + shift + n - 1) / (n * (n + k)) * y
        piece = term * (ly - digamma(n + 1.0) - digamma(n + k + 1.0)
                        + digamma(a + n + shift) + digamma(b + n + shift))
        tail += piece
        if abs(piece) <= 1e-17 * abs(tail):
            small += 1
            if small >= 2:
                return tail
        else:
            small = 0
    raise NonConvergence("log-case series failed to converge")


def _log_case(a, b, m, x):
    """2F1(a, b; a+b+m; x) for integer m, x close to 1 (logarithmic case)."""
    y = 1.0 - x
    ly = math.log(y)
    c = a + b + m
    if m == 0:
        return -_gamma_ratio([c], [a, b]) * _log_tail(a, b, 0, 0.0, y, ly)
    if m > 0:
        pre1 = _gamma_ratio([float(m), c], [a + m, b + m])
        fin = 0.0
        term = 1.0
        for n in range(m):
            if n > 0:
                term *= (a + n - 1) * (b + n - 1) / (n * (n - m)) * y
            fin += term
        pre2 = _gamma_ratio([c], [a, b])
        tail = _log_tail(a, b, m, float(m), y, ly) if pre2 != 0.0 else 0.0
        sgn = -1.0 if m % 2 else 1.0
        return pre1 * fin - sgn * y ** m * pre2 * tail
    k = -m
    pre1 = _gamma_ratio([float(k), c], [a, b])
    fin = 0.0
    term = 1.0
    for n in range(k):
        if n > 0:
            term *= (a - k + n - 1) * (b - k + n - 1) / (n * (n - k)) * y
        fin += term
    pre2 = _gamma_ratio([c], [a - k, b - k])
    tail = _log_tail(a, b, k, 0.0, y, ly) if pre2 != 0.0 else 0.0
    sgn = -1.0 if k % 2 else 1.0
    return pre1 * y ** (-k) * fin - sgn * pre2 * tail


def hyp2f1(a, b, c, x):
    """Gauss hypergeometric 2F1(a, b; c; x) for real parameters, 0 <= x < 1."""
    if _is_nonpos_int(c) or _near_nonpositive_int(c):
        raise ParameterPole(f"2F1 lower parameter c={c!r} is a pole")
    if not 0.0 <= x < 1.0:
        raise ValueError("hyp2f1 requires 0 <= x < 1")
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if x <= 0.5 or _is_nonpos_int(a) or _is_nonpos_int(b):
        return _gauss_series(a, b, c, x)
    s = c - a - b
    m = round(s)
    dist = abs(s - m)
    # the connection formula cancels like 1e-16/dist near integer c-a-b and
    # the log-case sums cancel away from x = 1, so prefer the direct series
    if x <= 0.9 or (dist < NEAR_INT and x <= 0.99):
        return _gauss_series(a, b, c, x)
    if dist <= INT_BAND:
        return _log_case(a, b, int(m), x)
    y = 1.0 - x
    out = 0.0
    g1 = _gamma_ratio([c, s], [c - a, c - b])
    if g1 != 0.0:
        out += g1 * _gauss_series(a, b, 1.0 - s, y)
    g2 = _gamma_ratio([c, -s], [a, b])
    if g2 != 0.0:
        out += g2 * y ** s * _gauss_series(c - a, c - b, s + 1.0, y)
    return out


# array helpers ---------------------------------------------------------------

def _loggamma_lanczos_vec(z):
    z = z - 1.0
    x = np.full(z.shape, LANCZOS_COEF[0], dtype=complex)
    for k in range(1, 9):
        x += LANCZOS_COEF[k] / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def loggamma_vec(z):
    """Vectorised :func:`loggamma` over a complex array without pole checks."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    hi = z.real >= 0.5
    out[hi] = _loggamma_lanczos_vec(z[hi])
    lo = ~hi
    if lo.any():
        w = z[lo]
        flip = w.imag < 0.0
        w = np.where(flip, w.conj(), w)
        logsin = (-1j * math.pi * w + 0.5j * math.pi - LOG_2
                  + np.log(1.0 - np.exp(2j * math.pi * w)))
        val = LOG_PI - logsin - _loggamma_lanczos_vec(1.0 - w)
        out[lo] = np.where(flip, val.conj(), val)
    return out


def gamma_ratio_sq_vec(a, b, xi):
    """exp(2 Re[log G(a + i xi/2) - log G(b + i xi/2)]) over an array ``xi``."""
    xi = np.asarray(xi, dtype=float)
    za = a + 0.5j * xi
    zb = b + 0.5j * xi
    return np.exp(2.0 * (loggamma_vec(za).real - loggamma_vec(zb).real))


def hyp2f1_vec(a, b, c, x):
    x = np.asarray(x, dtype=float)
    return np.array([hyp2f1(a, b, c, float(v)) for v in x.ravel()]).reshape(x.shape)


def paired_sum(v, w):
    """out[i] = sum_{k>=1} w[k] * (v[i+k] + v[i-k]) with v zero off the grid."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    n = v.size
    kmax = w.size - 1
    full = np.concatenate([w[:0:-1], [0.0], w[1:]])
    conv = np.convolve(v, full)
    return conv[kmax:kmax + n]
