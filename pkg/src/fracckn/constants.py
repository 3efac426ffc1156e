"""Problem parameters and the scalar constants derived from them.

The weighted constant ``kappa`` is evaluated by quadrature of a combined,
absolutely integrable radial integrand (the principal value is removed by
folding the inner ball onto the exterior), with the angular integral written
through a Gauss hypergeometric function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .errors import DivergentIntegral, QuadratureBudgetExceeded, ValidationError
from .specfun import hyp2f1, rgamma

__all__ = [
    "Parameters",
    "ProblemConstants",
    "ALPHA_MARGIN",
    "sphere_area",
    "exponent_p",
    "structural_constants",
    "angular_factor",
    "kappa_general",
    "power_multiplier",
    "kappa_general_with_error",
    "kappa",
    "C_alpha",
    "kappa_gamma",
    "h_alpha",
    "h_alpha_status",
    "problem_constants",
]

# alpha may not come closer than this to -2*gamma, where kappa blows up
ALPHA_MARGIN = 1e-6
# tolerance for recognising beta = alpha + gamma as the linear endpoint
ENDPOINT_TOL = 1e-14
# split point between adaptive quadrature and the analytic power-law tail
_TAIL_START = 4.0


@dataclass(frozen=True)
class Parameters:
    """Dimension ``n``, order ``gamma`` and the two weights ``alpha``, ``beta``.

    Construction validates the admissible set
    ``-2 gamma < alpha < (n - 2 gamma)/2`` and ``alpha <= beta <= alpha + gamma``.
    """

    n: int
    gamma: float
    alpha: float
    beta: float

    def __post_init__(self):
        n, g, a, b = self.n, self.gamma, self.alpha, self.beta
        if isinstance(n, bool) or int(n) != n:
            raise ValidationError(f"n must be an integer, got {n!r}")
        object.__setattr__(self, "n", int(n))
        for name in ("gamma", "alpha", "beta"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        n, g, a, b = self.n, self.gamma, self.alpha, self.beta
        if n < 2:
            raise ValidationError("n >= 2 required")
        if not 0.0 < g < 1.0:
            raise ValidationError("gamma must lie in (0, 1)")
        if a <= -2.0 * g:
            raise ValidationError("alpha <= -2*gamma: need -2*gamma < alpha")
        if a < -2.0 * g + ALPHA_MARGIN:
            raise ValidationError(
                f"alpha within {ALPHA_MARGIN} of -2*gamma, where kappa diverges")
        if a >= (n - 2.0 * g) / 2.0:
            raise ValidationError("alpha >= (n-2*gamma)/2: need alpha < (n-2*gamma)/2")
        if b < a:
            raise ValidationError("beta < alpha: need alpha <= beta")
        if b > a + g + ENDPOINT_TOL:
            raise ValidationError("beta > alpha+gamma: need beta <= alpha+gamma")

    @property
    def is_hardy_endpoint(self) -> bool:
        return abs(self.beta - self.alpha - self.gamma) <= ENDPOINT_TOL

    @property
    def p(self) -> float:
        return exponent_p(self)

    @property
    def nu(self) -> float:
        """Homogeneity (n - 2 gamma)/2 - alpha of the weighted problem."""
        return (self.n - 2.0 * self.gamma) / 2.0 - self.alpha

    @property
    def critical_p(self) -> float:
        return 2.0 * self.n / (self.n - 2.0 * self.gamma)

    def replace(self, **kw) -> "Parameters":
        d = {"n": self.n, "gamma": self.gamma, "alpha": self.alpha, "beta": self.beta}
        d.update(kw)
        return Parameters(**d)


@dataclass(frozen=True)
class ProblemConstants:
    sigma_ng: float
    c_ng: float
    kappa: float
    C_alpha: float
    kappa_gamma: float


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def exponent_p(params: Parameters) -> float:
    """p = 2n / (n - 2 gamma + 2 (beta - alpha)); exactly 2 at the endpoint."""
    if params.is_hardy_endpoint:
        return 2.0
    n, g = params.n, params.gamma
    return 2.0 * n / (n - 2.0 * g + 2.0 * (params.beta - params.alpha))


def structural_constants(n: int, gamma: float):
    """Return (sigma_{n,gamma}, c_{n,gamma}).

    sigma is the normalising constant of the fractional Laplacian kernel and
    c = 2^{2 gamma} (Gamma((n/2+gamma)/2) / Gamma((n/2-gamma)/2))^2 the value
    of the radial symbol at zero frequency.
    """
    if not 0.0 < gamma < 1.0:
        raise ValidationError("gamma must lie in (0, 1)")
    lg = math.lgamma
    sigma = math.exp(-0.5 * n * math.log(math.pi) + 2 * gamma * math.log(2.0)
                     + lg(n / 2.0 + gamma) - lg(1.0 - gamma)) * gamma
    c = 2.0 ** (2 * gamma) * math.exp(
        2.0 * (lg((n / 2.0 + gamma) / 2.0) - lg((n / 2.0 - gamma) / 2.0)))
    return sigma, c


def angular_factor(n: int, gamma: float, rho, method: str = "hypergeometric",
                   order: int = 64):
    """Angular integral |S^{n-2}| int_{-1}^{1} (1+rho^2-2 rho s)^{-(n+2g)/2} (1-s^2)^{(n-3)/2} ds.

    ``method="hypergeometric"`` uses the closed form
    |S^{n-1}| rho^{-(n+2g)} 2F1((n+2g)/2, 1+g; n/2; rho^{-2}) for rho > 1;
    ``method="gauss-jacobi"`` applies an ``order``-point Gauss-Jacobi rule
    (Chebyshev for n = 2), which is only accurate away from rho = 1.
    """
    a = (n + 2.0 * gamma) / 2.0
    rho = np.asarray(rho, dtype=float)
    if method == "hypergeometric":
        if np.any(rho <= 1.0):
            raise ValueError("closed form needs rho > 1")
        val = sphere_area(n) * rho ** (-2 * a) * hyp2f1(a, 1.0 + gamma, n / 2.0, rho ** -2.0)
        return float(val) if val.ndim == 0 else val
    if method == "gauss-jacobi":
        w_exp = (n - 3.0) / 2.0
        s, w = roots_jacobi(order, w_exp, w_exp)
        outer = sphere_area(n - 1) if n > 2 else 2.0
        r = rho[..., None]
        val = outer * np.sum(w * (1.0 + r * r - 2.0 * r * s) ** (-a), axis=-1)
        return float(val) if val.ndim == 0 else val
    raise ValueError(f"unknown method {method!r}")


def _check_finite_kappa(n, gamma, alpha, alpha_bar):
    if alpha <= -2.0 * gamma or alpha >= n:
        raise DivergentIntegral(f"kappa diverges for alpha={alpha!r} (need -2*gamma < alpha < n)")
    s = alpha + alpha_bar
    if s <= -2.0 * gamma or s >= n:
        raise DivergentIntegral(
            f"kappa diverges for alpha+alpha_bar={s!r} (need -2*gamma < alpha+alpha_bar < n)")


@lru_cache(maxsize=4096)
def _kappa_cached(n, gamma, alpha, alpha_bar, tol):
    if alpha_bar == 0.0:
        return 0.0, 0.0
    _check_finite_kappa(n, gamma, alpha, alpha_bar)
    a = (n + 2.0 * gamma) / 2.0
    b = 1.0 + gamma
    cc = n / 2.0
    area = sphere_area(n)
    e1 = n - alpha
    e2 = 2.0 * gamma + alpha + alpha_bar
    # leading behaviour of the integrand at rho -> 1 is K (rho-1)^{1-2 gamma}
    lim = (alpha_bar * (e1 - e2) * area * 2.0 ** (-1.0 - 2.0 * gamma)
           * math.exp(math.lgamma(cc) + math.lgamma(1.0 + 2.0 * gamma)
                      - math.lgamma(a) - math.lgamma(b)))
    w_exp = 1.0 - 2.0 * gamma

    def reduced(rho):
        # integrand divided by the algebraic weight (rho-1)^{1-2 gamma}
        h = rho - 1.0
        if h < 1e-12:
            return lim
        lr = math.log(rho)
        t1 = -math.expm1(-alpha_bar * lr)
        t2 = math.exp(e2 * lr) * math.expm1((e1 - e2) * lr)
        ang = area * math.exp(-2.0 * a * lr) * hyp2f1(a, b, cc, math.exp(-2.0 * lr))
        return t1 * t2 * ang / rho / h ** w_exp

    val, err, info = _quad(reduced, w_exp, tol)
    # exterior tail: expand the hypergeometric series and integrate each
    # power rho^{e - 1 - 2a - 2k} exactly
    R = _TAIL_START
    terms = ((1.0, e1), (-1.0, e2), (-1.0, n - alpha - alpha_bar), (1.0, 2.0 * gamma + alpha))
    tail = 0.0
    coef = 1.0
    for k in range(400):
        piece = 0.0
        for sgn, e in terms:
            piece += sgn * R ** (e - 2 * a - 2 * k) / (2 * a + 2 * k - e)
        piece *= coef
        tail += piece
        if abs(piece) <= 1e-17 * abs(tail) and k > 2:
            break
        coef *= (a + k) * (b + k) / ((cc + k) * (k + 1.0))
    else:
        raise QuadratureBudgetExceeded("tail series did not converge")
    tail *= area
    return val + tail, err + 1e-16 * abs(tail)


def _quad(f, w_exp, tol):
    val, err, *rest = integrate.quad(f, 1.0, _TAIL_START, weight="alg",
                                     wvar=(w_exp, 0.0), epsabs=0.0,
                                     epsrel=tol, limit=400, full_output=1)
    info = rest[0] if rest else {}
    if len(rest) > 1 and rest[1]:
        msg = rest[1]
        if "roundoff" not in str(msg) or err > 100 * tol * abs(val):
            raise QuadratureBudgetExceeded(f"kappa quadrature: {msg}")
    return val, err, info


def kappa_general_with_error(n: int, gamma: float, alpha: float, alpha_bar: float,
                             tol: float = 1e-9):
    """Return (kappa^{n, alpha_bar}_{alpha, gamma}, error estimate).

    Adaptive algebraic-weight quadrature on (1, 4) plus an exact term-by-term
    integral of the hypergeometric tail on (4, inf).
    """
    return _kappa_cached(int(n), float(gamma), float(alpha), float(alpha_bar), float(tol))


def kappa_general(n: int, gamma: float, alpha: float, alpha_bar: float,
                  tol: float = 1e-9) -> float:
    """kappa^{n, alpha_bar}_{alpha, gamma}; zero when alpha_bar = 0.

    Raises
    ------
    DivergentIntegral
        Outside -2 gamma < alpha < n, -2 gamma < alpha + alpha_bar < n.
    QuadratureBudgetExceeded
        If the adaptive rule cannot reach ``tol``.
    """
    return kappa_general_with_error(n, gamma, alpha, alpha_bar, tol)[0]


def power_multiplier(n: int, gamma: float, s: float) -> float:
    """lambda(s) with (-Delta)^gamma |x|^{-s} = lambda(s) |x|^{-s-2 gamma}.

    lambda(s) = 2^{2g} Gamma((s+2g)/2) Gamma((n-s)/2) / (Gamma(s/2) Gamma((n-s-2g)/2)),
    valid for -2 gamma < s < n; it vanishes at s = 0 and s = n - 2 gamma.
    Differences of lambda give sigma * kappa^{n, s - alpha}_{alpha, gamma}.
    """
    if not -2.0 * gamma < s < n:
        raise DivergentIntegral(f"lambda(s) needs -2*gamma < s < n, got s={s!r}")
    return (2.0 ** (2.0 * gamma) * math.gamma((s + 2.0 * gamma) / 2.0)
            * math.gamma((n - s) / 2.0) * rgamma(s / 2.0)
            * rgamma((n - s - 2.0 * gamma) / 2.0))


def kappa(params: Parameters, tol: float = 1e-9) -> float:
    """kappa^n_{alpha,gamma} = kappa^{n, nu}_{alpha, gamma} with nu = (n-2g)/2 - alpha."""
    return kappa_general(params.n, params.gamma, params.alpha, params.nu, tol)


def C_alpha(params: Parameters, tol: float = 1e-9) -> float:
    """C(alpha) = sigma_{n,gamma} kappa - c_{n,gamma}."""
    sigma, c = structural_constants(params.n, params.gamma)
    return sigma * kappa(params, tol) - c


def kappa_gamma(c0: float, n: int, gamma: float) -> float:
    """Zero-frequency offset c0 + c_{n,gamma} of the continuation problem."""
    return c0 + structural_constants(n, gamma)[1]


def h_alpha(params: Parameters, M: float, tol: float = 1e-9) -> float:
    """Symmetry-breaking threshold beta = h(alpha) for a given constant M > 0."""
    if not M > 0.0:
        raise ValidationError("M must be positive")
    C = C_alpha(params, tol)
    g, n = params.gamma, params.n
    return (4.0 * g * C - M * (n - 2.0 * g)) / (4.0 * C + 2.0 * M) + params.alpha


def h_alpha_status(params: Parameters, M: float, tol: float = 1e-9) -> str:
    """Where h(alpha) falls relative to the admissible band (alpha, alpha+gamma)."""
    h = h_alpha(params, M, tol)
    if h <= params.alpha:
        return "below"
    if h >= params.alpha + params.gamma:
        return "above"
    return "inside"


def problem_constants(params: Parameters, tol: float = 1e-9) -> ProblemConstants:
    sigma, c = structural_constants(params.n, params.gamma)
    k = kappa(params, tol)
    C = sigma * k - c
    return ProblemConstants(sigma_ng=sigma, c_ng=c, kappa=k, C_alpha=C,
                            kappa_gamma=C + c)
