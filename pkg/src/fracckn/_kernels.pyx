# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar and array kernels.

Same algorithms and branch logic as ``_specfun_py``; kept in sync by the
backend-parity tests.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport (M_PI, exp, fabs, floor, fmod, lgamma, log,
                        round as cround, sin, tan)

from .errors import NonConvergence, OverflowFailure, ParameterPole, PoleError

cnp.import_array()

cdef extern from "<complex.h>" nogil:
    double complex clog(double complex)
    double complex cexp(double complex)
    double complex ctan(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)

cdef double[9] LANCZOS_COEF
LANCZOS_COEF[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double LANCZOS_G = 7.0
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double LOG_PI = 1.1447298858494002
cdef double LOG_2 = 0.69314718055994530942
cdef double POLE_TOL = 1e-12
cdef double INT_BAND = 1e-8
cdef double NEAR_INT = 1e-4
cdef int SERIES_BUDGET = 20000
cdef double[7] PSI_ASYM
PSI_ASYM[:] = [1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132,
               -691.0 / 32760, 1.0 / 12]


cdef inline bint near_nonpos_int(double x) noexcept nogil:
    return x <= 0.5 and fabs(x - cround(x)) <= POLE_TOL


cdef inline bint is_nonpos_int(double x) noexcept nogil:
    return x <= 0.0 and x == floor(x)


cdef double complex lanczos(double complex z) noexcept nogil:
    cdef double complex x, t
    cdef int k
    z = z - 1.0
    x = LANCZOS_COEF[0]
    for k in range(1, 9):
        x = x + LANCZOS_COEF[k] / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * clog(t) - t + clog(x)


cdef double complex loggamma_nocheck(double complex z) noexcept nogil:
    cdef double complex w, logsin, val
    cdef bint flip
    if creal(z) >= 0.5:
        return lanczos(z)
    flip = cimag(z) < 0.0
    w = conj(z) if flip else z
    logsin = (-1j * M_PI * w + 0.5j * M_PI - LOG_2
              + clog(1.0 - cexp(2j * M_PI * w)))
    val = LOG_PI - logsin - lanczos(1.0 - w)
    return conj(val) if flip else val


cdef double complex c_loggamma(double complex z) except *:
    if fabs(cimag(z)) <= POLE_TOL and near_nonpos_int(creal(z)):
        raise PoleError(f"log_gamma pole at z={z!r}")
    return loggamma_nocheck(z)


def loggamma(z):
    """Principal branch of log Gamma(z) for complex ``z``."""
    return c_loggamma(complex(z))


def loggamma_vec(z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(
        np.asarray(z, dtype=complex).ravel())
    cdef Py_ssize_t i, n = zz.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=complex)
    with nogil:
        for i in range(n):
            out[i] = loggamma_nocheck(zz[i])
    return out.reshape(np.shape(z))


def gamma_ratio_sq_vec(double a, double b, xi):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.ascontiguousarray(
        np.asarray(xi, dtype=float).ravel())
    cdef Py_ssize_t i, n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double complex za, zb
    with nogil:
        for i in range(n):
            za = a + 0.5j * x[i]
            zb = b + 0.5j * x[i]
            out[i] = exp(2.0 * (creal(loggamma_nocheck(za))
                                - creal(loggamma_nocheck(zb))))
    return out.reshape(np.shape(xi))


cdef double c_digamma(double x) except? -1.0e308:
    cdef double acc = 0.0, inv2, s, p
    cdef int k
    if x <= 0.0:
        if x == floor(x):
            raise PoleError(f"digamma pole at x={x!r}")
        return c_digamma(1.0 - x) - M_PI / tan(M_PI * x)
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = 0.0
    p = inv2
    for k in range(7):
        s += PSI_ASYM[k] * p
        p *= inv2
    return acc + log(x) - 0.5 / x - s


def digamma(double x):
    """Real digamma function."""
    return c_digamma(x)


def cdigamma(z):
    """Complex digamma function."""
    cdef double complex w = complex(z)
    cdef double complex acc = 0.0, inv2, s, p
    cdef int k
    if creal(w) < 0.5:
        if fabs(cimag(w)) <= POLE_TOL and near_nonpos_int(creal(w)):
            raise PoleError(f"digamma pole at z={z!r}")
        return cdigamma(1.0 - w) - M_PI / ctan(M_PI * w)
    while cabs(w) < 10.0:
        acc = acc - 1.0 / w
        w = w + 1.0
    inv2 = 1.0 / (w * w)
    s = 0.0
    p = inv2
    for k in range(7):
        s = s + PSI_ASYM[k] * p
        p = p * inv2
    return acc + clog(w) - 0.5 / w - s


cdef double lgamma_signed(double x, double* sign) except? -1.0e308:
    if near_nonpos_int(x):
        raise PoleError(f"gamma pole at x={x!r}")
    if x > 0.0:
        sign[0] = 1.0
    else:
        sign[0] = -1.0 if (<long>floor(x)) % 2 != 0 else 1.0
    return lgamma(x)


def lgamma_sign(double x):
    """Return (sign, log|Gamma(x)|) for real ``x``."""
    cdef double s
    cdef double v = lgamma_signed(x, &s)
    return s, v


def rgamma(double x):
    """1/Gamma(x) for real ``x``; zero at the poles and smooth through them."""
    cdef double k, sn
    if is_nonpos_int(x):
        return 0.0
    if x < 0.5:
        k = cround(x)
        sn = sin(M_PI * (x - k))
        if fmod(k, 2.0) != 0.0:
            sn = -sn
        return exp(lgamma(1.0 - x)) * sn / M_PI
    return exp(-lgamma(x))


cdef double gauss_series(double a, double b, double c, double x) except? -1.0e308:
    cdef double term = 1.0, total = 1.0
    cdef int n, small = 0
    for n in range(SERIES_BUDGET):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        if fabs(term) <= 1e-17 * fabs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
        if term == 0.0:
            return total
    raise NonConvergence(
        f"2F1({a}, {b}; {c}; {x}) series missed tolerance in {SERIES_BUDGET} terms")


cdef double gamma_ratio(double* num, int nn, double* den, int nd) except? -1.0e308:
    cdef double sign = 1.0, lg = 0.0, s
    cdef int i
    for i in range(nd):
        if is_nonpos_int(den[i]):
            return 0.0
        lg -= lgamma_signed(den[i], &s)
        sign *= s
    for i in range(nn):
        lg += lgamma_signed(num[i], &s)
        sign *= s
    if lg > 709.0:
        raise OverflowFailure("Gamma ratio overflows double precision")
    return sign * exp(lg)


cdef double log_tail(double a, double b, int k, double shift, double y,
                     double ly) except? -1.0e308:
    # sum_n (a+shift)_n (b+shift)_n / (n! (n+k)!) y^n
    #       * [ln y - psi(n+1) - psi(n+k+1) + psi(a+n+shift) + psi(b+n+shift)]
    cdef double term = 1.0, tail = 0.0, piece
    cdef int n, j, small = 0
    for j in range(1, k + 1):
        term /= j
    for n in range(SERIES_BUDGET):
        if n > 0:
            term *= (a + shift + n - 1) * (b + shift + n - 1) / (n * (n + k)) * y
        piece = term * (ly - c_digamma(n + 1.0) - c_digamma(n + k + 1.0)
                        + c_digamma(a + n + shift) + c_digamma(b + n + shift))
        tail += piece
        if fabs(piece) <= 1e-17 * fabs(tail):
            small += 1
            if small >= 2:
                return tail
        else:
            small = 0
    raise NonConvergence("log-case series failed to converge")


cdef double log_case(double a, double b, int m, double x) except? -1.0e308:
    cdef double y = 1.0 - x, ly = log(y), c = a + b + m
    cdef double pre1, pre2, fin, term, tail, sgn
    cdef double num[2]
    cdef double den[2]
    cdef int n, k
    if m == 0:
        num[0] = c
        den[0] = a
        den[1] = b
        pre1 = gamma_ratio(num, 1, den, 2)
        return -pre1 * log_tail(a, b, 0, 0.0, y, ly)
    if m > 0:
        num[0] = <double>m
        num[1] = c
        den[0] = a + m
        den[1] = b + m
        pre1 = gamma_ratio(num, 2, den, 2)
        fin = 0.0
        term = 1.0
        for n in range(m):
            if n > 0:
                term *= (a + n - 1) * (b + n - 1) / (n * (n - m)) * y
            fin += term
        num[0] = c
        den[0] = a
        den[1] = b
        pre2 = gamma_ratio(num, 1, den, 2)
        tail = 0.0
        if pre2 != 0.0:
            tail = log_tail(a, b, m, <double>m, y, ly)
        sgn = -1.0 if m % 2 else 1.0
        return pre1 * fin - sgn * y ** m * pre2 * tail
    k = -m
    num[0] = <double>k
    num[1] = c
    den[0] = a
    den[1] = b
    pre1 = gamma_ratio(num, 2, den, 2)
    fin = 0.0
    term = 1.0
    for n in range(k):
        if n > 0:
            term *= (a - k + n - 1) * (b - k + n - 1) / (n * (n - k)) * y
        fin += term
    num[0] = c
    den[0] = a - k
    den[1] = b - k
    pre2 = gamma_ratio(num, 1, den, 2)
    tail = 0.0
    if pre2 != 0.0:
        tail = log_tail(a, b, k, 0.0, y, ly)
    sgn = -1.0 if k % 2 else 1.0
    return pre1 * y ** (-k) * fin - sgn * pre2 * tail


cdef double c_hyp2f1(double a, double b, double c, double x) except? -1.0e308:
    cdef double s, dist, y, out, g
    cdef double num[2]
    cdef double den[2]
    cdef long m
    if is_nonpos_int(c) or near_nonpos_int(c):
        raise ParameterPole(f"2F1 lower parameter c={c!r} is a pole")
    if not (0.0 <= x < 1.0):
        raise ValueError("hyp2f1 requires 0 <= x < 1")
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if x <= 0.5 or is_nonpos_int(a) or is_nonpos_int(b):
        return gauss_series(a, b, c, x)
    s = c - a - b
    m = <long>cround(s)
    dist = fabs(s - m)
    if x <= 0.9 or (dist < NEAR_INT and x <= 0.99):
        return gauss_series(a, b, c, x)
    if dist <= INT_BAND:
        return log_case(a, b, <int>m, x)
    y = 1.0 - x
    out = 0.0
    num[0] = c
    num[1] = s
    den[0] = c - a
    den[1] = c - b
    g = gamma_ratio(num, 2, den, 2)
    if g != 0.0:
        out += g * gauss_series(a, b, 1.0 - s, y)
    num[1] = -s
    den[0] = a
    den[1] = b
    g = gamma_ratio(num, 2, den, 2)
    if g != 0.0:
        out += g * y ** s * gauss_series(c - a, c - b, s + 1.0, y)
    return out


def hyp2f1(double a, double b, double c, double x):
    """Gauss hypergeometric 2F1(a, b; c; x) for real parameters, 0 <= x < 1."""
    return c_hyp2f1(a, b, c, x)


def hyp2f1_vec(double a, double b, double c, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xx = np.ascontiguousarray(
        np.asarray(x, dtype=float).ravel())
    cdef Py_ssize_t i, n = xx.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    for i in range(n):
        out[i] = c_hyp2f1(a, b, c, xx[i])
    return out.reshape(np.shape(x))


cdef double dot_fwd(const double* w, const double* v, Py_ssize_t m) noexcept nogil:
    # sum_{k=1..m} w[k] v[k]; four accumulators break the add dependency chain
    cdef double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0
    cdef Py_ssize_t k = 1
    while k + 3 <= m:
        a0 += w[k] * v[k]
        a1 += w[k + 1] * v[k + 1]
        a2 += w[k + 2] * v[k + 2]
        a3 += w[k + 3] * v[k + 3]
        k += 4
    while k <= m:
        a0 += w[k] * v[k]
        k += 1
    return (a0 + a1) + (a2 + a3)


cdef double dot_bwd(const double* w, const double* v, Py_ssize_t m) noexcept nogil:
    # sum_{k=1..m} w[k] v[-k]
    cdef double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0
    cdef Py_ssize_t k = 1
    while k + 3 <= m:
        a0 += w[k] * v[-k]
        a1 += w[k + 1] * v[-k - 1]
        a2 += w[k + 2] * v[-k - 2]
        a3 += w[k + 3] * v[-k - 3]
        k += 4
    while k <= m:
        a0 += w[k] * v[-k]
        k += 1
    return (a0 + a1) + (a2 + a3)


def paired_sum(v, w):
    """out[i] = sum_{k>=1} w[k] * (v[i+k] + v[i-k]) with v zero off the grid."""
    cdef const double[::1] vo = np.ascontiguousarray(v, dtype=float)
    cdef const double[::1] wo = np.ascontiguousarray(w, dtype=float)
    cdef Py_ssize_t n = vo.shape[0], kmax = wo.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double[::1] oo = out
    cdef Py_ssize_t i, hi, lo
    if n == 0:
        return out
    with nogil:
        for i in range(n):
            hi = kmax if kmax < n - 1 - i else n - 1 - i
            lo = kmax if kmax < i else i
            oo[i] = (dot_fwd(&wo[0], &vo[i], hi)
                     + dot_bwd(&wo[0], &vo[i], lo))
    return out
