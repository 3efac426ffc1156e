"""Grid, Fourier symbols, operator application and indicial roots on the t-line.

The conformal fractional operator acts on the n-th spherical-harmonic mode as
the Fourier multiplier

    Theta^(m)(xi) = 2^{2g} |Gamma(n/4 + g/2 + m/2 + i xi/2)|^2
                           / |Gamma(n/4 - g/2 + m/2 + i xi/2)|^2 .

Fields live on a periodic grid t_j = -T + j dt; they must be negligible near
the ends so that periodisation is harmless.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from ._backend import kernels as _k
from .constants import Parameters, C_alpha, sphere_area, structural_constants
from .errors import (BoundaryLeak, NewtonDivergence, NonPositiveField, PoleError,
                     RootNotBracketed, ValidationError)
from .specfun import complex_digamma, gamma_ratio_sq, log_gamma, rgamma

__all__ = [
    "Grid",
    "RadialField",
    "IndicialRoot",
    "symbol",
    "theta_symbol",
    "symbol_monotone",
    "mode_ordering",
    "apply_symbol",
    "apply_Pm",
    "kernel_K0",
    "apply_P0_kernel_oracle",
    "indicial_function",
    "indicial_roots",
    "decay_rate_fit",
    "spectral_derivative",
    "BOUNDARY_TOL",
]

BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class Grid:
    """Periodic lattice t_j = -T + j dt, j = 0..N-1, dt = 2T/N."""

    half_length: float
    points: int

    def __post_init__(self):
        T, N = float(self.half_length), self.points
        if isinstance(N, bool) or int(N) != N:
            raise ValidationError("N must be an integer")
        N = int(N)
        if N < 64 or N & (N - 1):
            raise ValidationError(f"N must be a power of two >= 64, got {N}")
        if not (math.isfinite(T) and T > 0.0):
            raise ValidationError("T must be positive")
        object.__setattr__(self, "half_length", T)
        object.__setattr__(self, "points", N)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points

    @property
    def t(self) -> np.ndarray:
        return -self.half_length + self.spacing * np.arange(self.points)

    @property
    def frequencies(self) -> np.ndarray:
        """xi_k = pi k / T for k = -N/2 .. N/2-1, ascending."""
        k = np.arange(-self.points // 2, self.points // 2)
        return math.pi * k / self.half_length

    @property
    def xi_fft(self) -> np.ndarray:
        """Frequencies in the order used by ``numpy.fft``."""
        return 2.0 * math.pi * np.fft.fftfreq(self.points, d=self.spacing)

    def mirror_index(self) -> np.ndarray:
        """Index of -t_j on the periodic grid (t_0 = -T maps to itself)."""
        return (-np.arange(self.points)) % self.points

    def refine(self) -> "Grid":
        return Grid(self.half_length, 2 * self.points)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Samples v(t_j) of a real function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        if v.shape != (self.grid.points,):
            raise ValidationError(
                f"field has shape {v.shape}, grid needs ({self.grid.points},)")
        if not np.all(np.isfinite(v)):
            raise ValidationError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, f) -> "RadialField":
        return cls(grid, f(grid.t))

    def boundary_ratio(self) -> float:
        """max(|v(-T)|, |v(-T+dt)|, |v(T-dt)|) / max|v|."""
        v = self.values
        peak = np.max(np.abs(v))
        if peak == 0.0:
            return 0.0
        return max(abs(v[0]), abs(v[1]), abs(v[-1])) / peak

    def check_boundary(self, tol: float = BOUNDARY_TOL) -> None:
        r = self.boundary_ratio()
        if r > tol:
            raise BoundaryLeak(
                f"field is not small at the grid ends (ratio {r:.3e} > {tol:g}); "
                "enlarge T")

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class IndicialRoot:
    tau: float
    sigma: float
    index: int
    residual: float


# --------------------------------------------------------------------------
# symbols

def _symbol_shifts(m, n, gamma):
    a = n / 4.0 + gamma / 2.0 + m / 2.0
    b = n / 4.0 - gamma / 2.0 + m / 2.0
    return a, b


def symbol(m: int, n: int, gamma: float, xi):
    """Theta^(m)(xi) for order ``gamma`` in (0, 1]; gamma = 1 is the local limit."""
    if m < 0:
        raise ValidationError("mode index must be >= 0")
    if not 0.0 < gamma <= 1.0:
        raise ValidationError("gamma must lie in (0, 1]")
    a, b = _symbol_shifts(m, n, gamma)
    return 2.0 ** (2.0 * gamma) * gamma_ratio_sq(a, b, xi)


def theta_symbol(m: int, params: Parameters, xi):
    """Fourier symbol of the mode-``m`` operator for ``params``."""
    return symbol(m, params.n, params.gamma, xi)


@lru_cache(maxsize=256)
def _symbol_on_grid(m, n, gamma, T, N):
    th = symbol(m, n, gamma, Grid(T, N).xi_fft)
    th.setflags(write=False)
    return th


def grid_symbol(m: int, n: int, gamma: float, grid: Grid) -> np.ndarray:
    """Theta^(m) sampled at the FFT frequencies of ``grid`` (cached, read-only)."""
    return _symbol_on_grid(int(m), int(n), float(gamma), grid.half_length, grid.points)


def symbol_monotone(m: int, params: Parameters, grid: Grid) -> bool:
    """Check that Theta^(m) is non-decreasing in |xi| on the grid frequencies."""
    xi = grid.frequencies
    xi = xi[xi >= 0.0]
    th = theta_symbol(m, params, xi)
    return bool(np.all(np.diff(th) >= -1e-14 * np.abs(th[1:])))


def mode_ordering(params: Parameters, grid: Grid, modes: int = 3) -> dict:
    """Report whether Theta^(0) < Theta^(1) < ... holds on the grid frequencies."""
    xi = grid.frequencies
    ths = [theta_symbol(m, params, xi) for m in range(modes)]
    out = {}
    for m in range(modes - 1):
        gap = ths[m + 1] - ths[m]
        out[f"{m}<{m + 1}"] = {"holds": bool(np.all(gap > 0.0)),
                               "min_gap": float(np.min(gap))}
    return out


def apply_symbol(values: np.ndarray, theta_fft: np.ndarray) -> np.ndarray:
    """Apply a Fourier multiplier given in FFT order; returns the real part."""
    out = np.fft.ifft(theta_fft * np.fft.fft(values))
    return out.real


def apply_Pm(field: RadialField, m: int, params: Parameters) -> RadialField:
    """Apply P^(m) by forward FFT, multiplication by Theta^(m), inverse FFT.

    Raises
    ------
    BoundaryLeak
        If the field is not negligible at the grid ends.
    """
    field.check_boundary()
    th = grid_symbol(m, params.n, params.gamma, field.grid)
    raw = np.fft.ifft(th * np.fft.fft(field.values))
    # the multiplier is real and even, so the imaginary part is round-off
    scale = np.linalg.norm(field.values)
    if np.linalg.norm(raw.imag) > 1e-12 * max(scale, 1e-300) * 10:
        raise ValidationError("operator output has a non-negligible imaginary part")
    return RadialField(field.grid, raw.real)


def spectral_derivative(values: np.ndarray, grid: Grid) -> np.ndarray:
    xi = grid.xi_fft.copy()
    xi[grid.points // 2] = 0.0  # drop the unpaired Nyquist mode
    return np.fft.ifft(1j * xi * np.fft.fft(values)).real


# --------------------------------------------------------------------------
# kernel oracle for mode 0

def kernel_K0(n: int, gamma: float, h):
    """Radial convolution kernel of mode 0 at separation |h| > 0.

    |S^{n-1}| e^{-(n+2g)|h|/2} 2F1((n+2g)/2, 1+g; n/2; e^{-2|h|}); behaves like
    (C_{1,g}/sigma_{n,g}) |h|^{-1-2g} as h -> 0.
    """
    h = np.abs(np.asarray(h, dtype=float))
    a = (n + 2.0 * gamma) / 2.0
    x = np.exp(-2.0 * h)
    val = sphere_area(n) * np.exp(-a * h) * _k.hyp2f1_vec(a, 1.0 + gamma, n / 2.0, x)
    return float(val) if val.ndim == 0 else val


_GL_U, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_U = 0.5 * (_GL_U + 1.0)
_GL_W = 0.5 * _GL_W


@lru_cache(maxsize=32)
def _oracle_weights(n, gamma, dt, N):
    """Product-integration weights W_k (k = 0..K+1) and the far-field mass."""
    K = N + 2  # cells [h_k, h_k+1] for k = 1..K-1 cover beyond the window
    u = _GL_U
    # cubic Lagrange basis on nodes u = -1, 0, 1, 2
    basis = np.stack([
        -u * (u - 1) * (u - 2) / 6.0,
        (u + 1) * (u - 1) * (u - 2) / 2.0,
        -(u + 1) * u * (u - 2) / 2.0,
        (u + 1) * u * (u - 1) / 6.0,
    ])
    ks = np.arange(1, K)
    h = (ks[:, None] + u[None, :]) * dt
    kern = kernel_K0(n, gamma, h.ravel()).reshape(h.shape)
    W = np.zeros(K + 2)
    for j in range(4):
        cell = dt * (kern * basis[j][None, :]) @ _GL_W
        np.add.at(W, ks - 1 + j, cell)
    # innermost cell: D(h) ~ d2 h^2 + d4 h^4 fitted to D(dt), D(2 dt)
    g2 = 1.0 + 2.0 * gamma

    def bounded(hh):
        hh = max(hh, 1e-9 * dt)
        return kernel_K0(n, gamma, hh) * hh ** g2

    m2 = integrate.quad(bounded, 0.0, dt, weight="alg", wvar=(1.0 - 2 * gamma, 0.0),
                        epsabs=0.0, epsrel=1e-12, limit=200)[0] / dt ** 2
    m4 = integrate.quad(bounded, 0.0, dt, weight="alg", wvar=(3.0 - 2 * gamma, 0.0),
                        epsabs=0.0, epsrel=1e-12, limit=200)[0] / dt ** 4
    W[1] += (16.0 * m2 - 4.0 * m4) / 12.0
    W[2] += (m4 - m2) / 12.0
    W[0] = 0.0  # D vanishes at h = 0
    # beyond h = K dt both neighbours are off the window: D = 2 v(t)
    far = integrate.quad(lambda hh: kernel_K0(n, gamma, hh), K * dt, np.inf,
                         epsabs=0.0, epsrel=1e-10, limit=200)[0]
    W.setflags(write=False)
    return W, far


def apply_P0_kernel_oracle(field: RadialField, params: Parameters) -> RadialField:
    """Apply P^(0) by direct quadrature of its singular convolution kernel.

    P v(t) = sigma int K0(h) [2 v(t) - v(t+h) - v(t-h)] dh + c v(t), h > 0.
    Cells away from h = 0 use cubic product integration of the paired second
    difference; the innermost cell uses its even expansion a h^2 + b h^4 with
    the singular moments integrated exactly.  The field is taken as zero
    outside the window.  Cost O(N^2); meant as an independent check of
    :func:`apply_Pm`.
    """
    field.check_boundary()
    grid = field.grid
    n, g = params.n, params.gamma
    sigma, c = structural_constants(n, g)
    W, far = _oracle_weights(n, g, grid.spacing, grid.points)
    v = field.values
    total = float(np.sum(W)) + far
    integral = 2.0 * v * total - _k.paired_sum(v, W)
    return RadialField(grid, sigma * integral + c * v)


# --------------------------------------------------------------------------
# indicial roots

def indicial_function(params: Parameters, sigma: float, C: float | None = None) -> float:
    """g(sigma) = Theta^(0)(i sigma) + C(alpha), evaluated with real Gamma values."""
    if C is None:
        C = C_alpha(params)
    a, b = _symbol_shifts(0, params.n, params.gamma)
    return _axis_symbol(a, b, params.gamma, sigma) + C


def _axis_symbol(a, b, gamma, s):
    num = _k.lgamma_sign(a + s / 2.0)
    den = rgamma(b + s / 2.0) * rgamma(b - s / 2.0)
    if den == 0.0:
        return 0.0
    num2 = _k.lgamma_sign(a - s / 2.0)
    return (2.0 ** (2 * gamma) * num[0] * num2[0] * math.exp(num[1] + num2[1]) * den)


def _complex_symbol(a, b, gamma, z):
    w = 0.5j * z
    val = (log_gamma(a + w) + log_gamma(a - w) - log_gamma(b + w) - log_gamma(b - w))
    return 2.0 ** (2 * gamma) * np.exp(val)


def _complex_dlog(a, b, z):
    w = 0.5j * z
    return 0.5j * (complex_digamma(a + w) - complex_digamma(a - w)
                   - complex_digamma(b + w) + complex_digamma(b - w))


def indicial_roots(params: Parameters, count: int = 1, C: float | None = None):
    """First ``count`` roots z = i sigma_j of Theta^(0)(z) + C(alpha) = 0.

    Each root is bracketed on the imaginary axis between consecutive zeros
    (2j + (n-2g)/2) and poles (2j + (n+2g)/2) of the axis symbol, located by
    Brent bisection in real arithmetic, then polished by complex Newton steps
    using the digamma logarithmic derivative.

    Raises
    ------
    RootNotBracketed
        If the expected sign change is absent.
    NewtonDivergence
        If the complex polish moves away from the bracket or fails to reach a
        residual of 1e-10.
    """
    if count < 1:
        return []
    if C is None:
        C = C_alpha(params)
    n, g = params.n, params.gamma
    a, b = _symbol_shifts(0, n, g)
    zeros = lambda j: (n - 2.0 * g) / 2.0 + 2.0 * j
    poles = lambda j: (n + 2.0 * g) / 2.0 + 2.0 * j
    f = lambda s: _axis_symbol(a, b, g, s) + C
    roots = []
    for j in range(count):
        z0 = zeros(j)
        if C == 0.0:
            s = z0
        else:
            if C > 0.0:
                lo, hi = z0, poles(j)
                open_end, closed = hi, lo
            else:
                lo, hi = (poles(j - 1) if j > 0 else 0.0), z0
                open_end, closed = lo, hi
            fc = f(closed)
            width = hi - lo
            found = False
            for e in range(1, 80):
                trial = open_end - math.copysign(width * 2.0 ** -e, open_end - closed)
                ft = f(trial)
                if np.sign(ft) == -np.sign(fc) and ft != 0.0:
                    found = True
                    break
            if not found:
                raise RootNotBracketed(
                    f"no sign change of Theta(i s)+C in root interval {j} "
                    f"({lo:.6g}, {hi:.6g})")
            s = optimize.brentq(f, min(closed, trial), max(closed, trial),
                                xtol=1e-15, rtol=1e-15, maxiter=500)
        z, res = _polish(a, b, g, C, complex(0.0, s))
        roots.append(IndicialRoot(tau=float(z.real), sigma=float(z.imag), index=j,
                                  residual=float(res)))
    return roots


def _polish(a, b, gamma, C, z, maxit=20):
    def resid(zz):
        if zz.real == 0.0:
            # pole-safe real evaluation on the imaginary axis
            return _axis_symbol(a, b, gamma, zz.imag) + C
        return _complex_symbol(a, b, gamma, zz) + C

    r = resid(z)
    best, best_res = z, abs(r)
    for _ in range(maxit):
        if best_res <= 1e-13 * max(1.0, abs(C)):
            break
        try:
            deriv = (r - C) * _complex_dlog(a, b, z)
        except PoleError:
            # root sits on a zero of 1/Gamma; the bracketed value is final
            break
        if deriv == 0.0 or not np.isfinite(deriv):
            break
        z_new = z - r / deriv
        r_new = resid(z_new)
        if not np.isfinite(r_new) or abs(r_new) >= best_res:
            break
        z, r = z_new, r_new
        best, best_res = z, abs(r)
    if not best_res <= 1e-10:
        raise NewtonDivergence(f"indicial root residual {best_res:.3e} > 1e-10",
                               last_iterate=best)
    return best, best_res


# --------------------------------------------------------------------------
# tails

def decay_rate_fit(field: RadialField, window):
    """Least-squares fit log v(t) = log a - sigma t on ``window`` = (t0, t1).

    Returns
    -------
    rate, amplitude, r2
    """
    t0, t1 = map(float, window)
    grid = field.grid
    if not (0.0 < t0 < t1 < grid.half_length - 2 * grid.spacing):
        raise ValidationError("window must satisfy 0 < t0 < t1 < T - 2 dt")
    t = grid.t
    mask = (t >= t0) & (t <= t1)
    v = field.values[mask]
    if v.size < 3:
        raise ValidationError("window holds fewer than three grid points")
    if np.any(v <= 0.0):
        raise NonPositiveField("field must be strictly positive on the fit window")
    tt = t[mask]
    y = np.log(v)
    slope, icpt = np.polyfit(tt, y, 1)
    fit = slope * tt + icpt
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return float(-slope), float(math.exp(icpt)), r2
