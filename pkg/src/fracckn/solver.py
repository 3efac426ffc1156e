"""Energy functional, ground-state solvers, radial minimisation and continuation.

All solvers work with an equation of the form

    L v = k |v|^{p-2} v,     L = Fourier multiplier theta_L(xi) > 0,

restricted to fields that are even about t = 0.  For the weighted problem
theta_L = Theta^(0) + C(alpha) and k = sigma_{n,gamma} kappa, so that v = 1 is
a (non-decaying) exact solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.linalg import LinAlgError, solve
from scipy.sparse.linalg import LinearOperator, gmres

from ._parity import circulant_column, even_block, from_even, to_even
from .constants import (Parameters, problem_constants, sphere_area,
                        structural_constants)
from .errors import (BoundaryLeak, FlowStall, NewtonStall, PositivityLoss,
                     StepFailure, ValidationError, ZeroField)
from .spectral import (BOUNDARY_TOL, Grid, RadialField, apply_symbol,
                       grid_symbol, indicial_roots, symbol)

__all__ = [
    "SolveResult",
    "BranchPoint",
    "energy_F",
    "bubble_profile",
    "bubble_amplitude",
    "preset_profile",
    "solve_ground_state",
    "minimize_radial",
    "hardy_cutoff",
    "hardy_limit_check",
    "richardson_limit",
    "continuation_gamma",
    "branch_bounds",
    "soliton_gamma1",
    "spectral_tail_ratio",
    "suggest_half_length",
]

POSITIVITY_TOL = 1e-8
PETVIASHVILI_SWITCH = 1e-2
# Newton steps use a dense even-sector solve up to this N, GMRES above
DIRECT_LIMIT = 4096
# spectral content in the top eighth of the band above this (relative to the
# mean) means the profile is narrower than the grid can represent
RESOLUTION_TOL = 1e-10


def suggest_half_length(params: Parameters, tol: float = BOUNDARY_TOL,
                        floor: float = 20.0, potential_tol: float | None = None) -> float:
    """Half-length T at which a tail e^{-sigma_0 |t|} has dropped below ``tol``.

    Uses 1.3 log(1/tol) / sigma_0 (the factor covers the tail amplitude).
    With ``potential_tol`` the linearised potential (p-1) k v^{p-2} must also
    fall below it at the ends; it decays only like e^{-(p-2) sigma_0 |t|}, so
    this dominates close to p = 2.  Round-off puts a floor of roughly
    (1e-16)^{p-2} under that potential whatever T is.  Rounded up to a multiple of 4, never
    below ``floor``.
    """
    sigma0 = indicial_roots(params, 1)[0].sigma
    T = 1.3 * math.log(1.0 / tol) / sigma0
    if potential_tol is not None:
        p = params.p
        pc = problem_constants(params)
        k = pc.sigma_ng * pc.kappa
        amp = 4.0 * (p / 2.0) ** (1.0 / (p - 2.0))
        Tv = 1.15 * (math.log((p - 1.0) * k / potential_tol) / (p - 2.0)
                     + math.log(amp)) / sigma0
        T = max(T, Tv)
    return float(max(floor, 4.0 * math.ceil(T / 4.0)))


def spectral_tail_ratio(v) -> float:
    """max |v_hat| over the top eighth of frequencies divided by |v_hat(0)|."""
    F = np.abs(np.fft.rfft(v))
    if F[0] == 0.0:
        return math.inf
    return float(np.max(F[-max(1, len(F) // 8):]) / F[0])


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Converged ground state of L v = k v^{p-1} with diagnostics.

    ``residual`` is the sup-norm of the Euler-Lagrange defect and
    ``normalization`` the constant k = sigma kappa multiplying v^{p-1}.
    """

    field: RadialField
    residual: float
    energy: float
    normalization: float
    iterations: int
    recentering_shift: float
    params: Parameters | None = None
    C_alpha: float = 0.0
    flags: tuple = dc_field(default=())


@dataclass(frozen=True, eq=False)
class BranchPoint:
    gamma: float
    field: RadialField
    residual: float
    iterations: int = 0


# --------------------------------------------------------------------------
# energy

def _lp_norm_p(v, p, dt):
    return float(np.sum(np.abs(v) ** p) * dt)


def energy_F(field: RadialField, params: Parameters, C: float | None = None) -> float:
    """Cylinder energy of a radial field.

    F(v) = |S^{n-1}|^{1-2/p} (2/sigma) [int v P^(0) v + C int v^2] / (int |v|^p)^{2/p}.
    Invariant under v -> lambda v and under translations.

    Raises
    ------
    ZeroField
        If the field vanishes identically.
    """
    v = field.values
    if not np.any(v):
        raise ZeroField("energy of the zero field is undefined")
    field.check_boundary()
    if C is None:
        C = problem_constants(params).C_alpha
    sigma, _ = structural_constants(params.n, params.gamma)
    p = params.p
    dt = field.grid.spacing
    th = grid_symbol(0, params.n, params.gamma, field.grid)
    quad = float(np.dot(v, apply_symbol(v, th) + C * v) * dt)
    omega = sphere_area(params.n)
    return omega ** (1.0 - 2.0 / p) * 2.0 / sigma * quad / _lp_norm_p(v, p, dt) ** (2.0 / p)


# --------------------------------------------------------------------------
# closed-form profiles

def bubble_profile(t, n: int, gamma: float):
    """(2 cosh t)^{-(n-2g)/2}, the unweighted extremal profile (unit amplitude)."""
    t = np.asarray(t, dtype=float)
    e = (n - 2.0 * gamma) / 2.0
    # log(2 cosh t) = |t| + log1p(exp(-2|t|)) avoids overflow
    return np.exp(-e * (np.abs(t) + np.log1p(np.exp(-2.0 * np.abs(t)))))


def bubble_amplitude(n: int, gamma: float) -> float:
    """Amplitude A with P^(0)(A b) = c_{n,g} (A b)^{(n+2g)/(n-2g)} for the bubble b.

    The unit bubble satisfies P^(0) b = lambda_b b^{(n+2g)/(n-2g)} with
    lambda_b = 2^{2g} Gamma((n+2g)/2)/Gamma((n-2g)/2), so A = (lambda_b/c)^{1/(p-2)}.
    """
    lam = 2.0 ** (2 * gamma) * math.exp(math.lgamma((n + 2 * gamma) / 2.0)
                                         - math.lgamma((n - 2 * gamma) / 2.0))
    _, c = structural_constants(n, gamma)
    pm2 = 4.0 * gamma / (n - 2.0 * gamma)
    return (lam / c) ** (1.0 / pm2)


def soliton_gamma1(t, n: int, c0: float, p0: float):
    """Exact even solution of -v'' + a v = v^{p0-1}, a = (n-2)^2/4 + c0."""
    a = (n - 2.0) ** 2 / 4.0 + c0
    if a <= 0.0:
        raise ValidationError("need (n-2)^2/4 + c0 > 0")
    t = np.asarray(t, dtype=float)
    q = p0 - 2.0
    return (p0 * a / 2.0) ** (1.0 / q) / np.cosh(q * math.sqrt(a) * t / 2.0) ** (2.0 / q)


def _local_soliton(t, decay, k, p):
    # sech^{2/(p-2)} profile of -v'' + decay^2 v = k v^{p-1}
    q = p - 2.0
    amp = (p * decay ** 2 / (2.0 * k)) ** (1.0 / q)
    x = np.abs(q * decay * np.asarray(t) / 2.0)
    # sech(x)^{2/q} computed in log form to avoid overflow
    return amp * np.exp(-(2.0 / q) * (x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)))


def preset_profile(params: Parameters, grid: Grid, C: float | None = None,
                   k: float | None = None) -> RadialField:
    """Sech-power initial guess with exponent 2/(p-2) and width from sigma_0."""
    if params.p <= 2.0:
        raise ValidationError("preset profile needs p > 2")
    if C is None or k is None:
        pc = problem_constants(params)
        C, k = pc.C_alpha, pc.sigma_ng * pc.kappa
    sigma0 = indicial_roots(params, 1, C=C)[0].sigma
    return RadialField(grid, _local_soliton(grid.t, sigma0, k, params.p))


# --------------------------------------------------------------------------
# core even-sector solver for L v = k |v|^{p-2} v

def _symmetrize(v, mirror):
    return 0.5 * (v + v[mirror])


def _nonlin(v, k, p):
    return k * np.abs(v) ** (p - 2.0) * v


class _Engine:
    def __init__(self, theta_L, k, p, grid):
        self.theta = np.asarray(theta_L, dtype=float)
        if np.min(self.theta) <= 0.0:
            raise ValidationError("linear symbol must be positive")
        self.k = float(k)
        self.p = float(p)
        self.grid = grid
        self.mirror = grid.mirror_index()
        self.n = grid.points
        self._col = None

    def L(self, v):
        return apply_symbol(v, self.theta)

    def Linv(self, v):
        return apply_symbol(v, 1.0 / self.theta)

    def G(self, v):
        return self.L(v) - _nonlin(v, self.k, self.p)

    def petviashvili(self, v, switch=PETVIASHVILI_SWITCH, max_iter=500):
        p, k = self.p, self.k
        expo = (p - 1.0) / (p - 2.0)
        it = 0
        for it in range(1, max_iter + 1):
            Nv = _nonlin(v, k, p)
            num = float(np.dot(v, self.L(v)))
            den = float(np.dot(v, Nv))
            if den <= 0.0:
                raise PositivityLoss("nonlinear term vanished during the projection phase")
            M = num / den
            v = M ** expo * self.Linv(Nv)
            v = np.maximum(v, 0.0)
            v = _symmetrize(v, self.mirror)
            scale = np.max(np.abs(_nonlin(v, k, p)))
            if scale == 0.0:
                raise ZeroField("iteration collapsed to zero")
            if np.max(np.abs(self.G(v))) <= switch * scale:
                break
        return v, it

    def _newton_step(self, pot, G):
        """Solve (L - diag(pot)) delta = -G for even G."""
        if self.n <= DIRECT_LIMIT:
            # the Jacobian is circulant plus diagonal; on even fields it
            # reduces to a dense block of size N/2 + 1
            if self._col is None:
                self._col = circulant_column(self.theta)
            B = even_block(self._col, -pot)
            try:
                x = solve(B, -to_even(G), assume_a="sym")
            except LinAlgError:
                x = None
            if x is not None and np.all(np.isfinite(x)):
                return from_even(x)
        J = LinearOperator((self.n, self.n), matvec=lambda w: self.L(w) - pot * w,
                           dtype=float)
        M = LinearOperator((self.n, self.n), matvec=self.Linv, dtype=float)
        delta, _ = gmres(J, -G, M=M, rtol=1e-12, atol=0.0, restart=100, maxiter=20)
        return delta

    def newton(self, v, tol, max_iter=60):
        p, k = self.p, self.k
        G = self.G(v)
        res = float(np.max(np.abs(G)))
        hist = [res]
        it = 0
        floor_hits = 0
        for it in range(1, max_iter + 1):
            if res <= tol:
                # keep going while the residual still falls quickly, so the
                # tail is resolved down to round-off
                if len(hist) > 1 and res > 0.25 * hist[-2]:
                    floor_hits += 1
                if floor_hits >= 1 or res <= 1e-15 * max(1.0, np.max(np.abs(v))):
                    break
            pot = (p - 1.0) * k * np.abs(v) ** (p - 2.0)
            gnorm = float(np.linalg.norm(G))
            delta = self._newton_step(pot, G)
            delta = _symmetrize(delta, self.mirror)
            step = 1.0
            phi0 = gnorm ** 2
            while True:
                trial = v + step * delta
                Gt = self.G(trial)
                if float(np.dot(Gt, Gt)) <= (1.0 - 2e-4 * step) * phi0:
                    break
                step *= 0.5
                if step < 2.0 ** -20:
                    if res <= tol:
                        return v, res, it
                    raise NewtonStall(f"line search failed at residual {res:.3e}",
                                      best=v, residual=res, iterations=it)
            v, G = trial, Gt
            res = float(np.max(np.abs(G)))
            hist.append(res)
        if res > tol:
            raise NewtonStall(f"Newton did not reach {tol:g} (residual {res:.3e})",
                              best=v, residual=res, iterations=it)
        return v, res, it


def _centroid(v, t):
    w = np.abs(v)
    s = np.sum(w)
    if s == 0.0:
        raise ZeroField("field vanishes identically")
    return float(np.sum(w * t) / s)


def _check_positive(v, tol=POSITIVITY_TOL):
    peak = np.max(v)
    if peak <= 0.0 or np.min(v) < -tol * peak:
        raise PositivityLoss(
            f"solution changed sign (min {np.min(v):.3e}, max {peak:.3e})")


def _prepare_init(init, grid, fallback):
    """Recentre and symmetrise an initial field; taper it if it leaks."""
    flags = []
    if isinstance(init, RadialField):
        v = np.array(init.values, dtype=float)
        if init.grid != grid:
            raise ValidationError("initial field lives on a different grid")
    else:
        v = np.array(fallback().values, dtype=float)
    if not np.any(v):
        raise ZeroField("initial field is zero")
    shift = _centroid(v, grid.t)
    v = np.roll(v, -int(round(shift / grid.spacing)))
    v = _symmetrize(v, grid.mirror_index())
    peak = np.max(np.abs(v))
    if max(abs(v[0]), abs(v[1]), abs(v[-1])) > BOUNDARY_TOL * peak:
        env = fallback().values
        v = v * env / np.max(env)
        flags.append("init_tapered")
    return v, shift, flags


def _solve_equation(theta_L, k, p, grid, v, tol):
    eng = _Engine(theta_L, k, p, grid)
    v, it1 = eng.petviashvili(v)
    v, res, it2 = eng.newton(v, tol)
    return v, res, it1 + it2


def solve_ground_state(params: Parameters, grid: Grid, init="preset",
                       tol: float = 1e-10, quad_tol: float = 1e-9) -> SolveResult:
    """Solve P^(0) v + C(alpha) v = sigma kappa v^{p-1} for a positive even v.

    A Petviashvili phase (with projection onto v >= 0) brings the relative
    residual below 1e-2, then damped Newton-GMRES with the preconditioner
    (Theta^(0) + C)^{-1} and Armijo backtracking on |G|^2 finishes.

    Parameters
    ----------
    init : RadialField or "preset"
        Initial field.  Its mass centroid is reported as
        ``recentering_shift``; a field that is not small at the grid ends is
        multiplied by the preset envelope first.

    Notes
    -----
    ``flags`` gains ``"under_resolved"`` when the top of the Fourier band
    still carries more than 1e-10 of the mean; tails far below the peak are
    then polluted by aliasing and N should be raised.

    Raises
    ------
    NewtonStall, PositivityLoss, BoundaryLeak
    """
    if params.p <= 2.0:
        raise ValidationError(
            "p = 2 (beta = alpha + gamma) has no extremal; use hardy_limit_check")
    pc = problem_constants(params, quad_tol)
    C, k = pc.C_alpha, pc.sigma_ng * pc.kappa
    theta_L = grid_symbol(0, params.n, params.gamma, grid) + C
    if isinstance(init, str) and init != "preset":
        raise ValidationError(f"unknown init {init!r}")
    v, shift, flags = _prepare_init(init, grid,
                                    lambda: preset_profile(params, grid, C, k))
    v, res, its = _solve_equation(theta_L, k, params.p, grid, v, tol)
    _check_positive(v)
    field = RadialField(grid, v)
    field.check_boundary()
    if spectral_tail_ratio(v) > RESOLUTION_TOL:
        flags.append("under_resolved")
    energy = energy_F(field, params, C)
    return SolveResult(field=field, residual=res, energy=energy, normalization=k,
                       iterations=its, recentering_shift=shift, params=params,
                       C_alpha=C, flags=tuple(flags))


# --------------------------------------------------------------------------
# gradient flow

def _fourier_shift(v, grid, s):
    """v(t + s) by spectral interpolation."""
    xi = grid.xi_fft.copy()
    xi[grid.points // 2] = 0.0
    return np.fft.ifft(np.fft.fft(v) * np.exp(1j * xi * s)).real


def minimize_radial(params: Parameters, grid: Grid, init: RadialField | None = None,
                    tol: float = 1e-12, el_tol: float = 1e-8,
                    max_iter: int = 20000, quad_tol: float = 1e-9):
    """Minimise F over radial fields by a normalised, preconditioned gradient flow.

    Each step moves along the H^gamma gradient v - lam L^{-1}|v|^{p-2}v,
    L = Theta^(0) + C, and projects back onto int |v|^p = 1.  The step is
    halved whenever the energy would increase.  No symmetry is imposed; the
    final field is only translated so that its centroid sits at t = 0.

    Returns
    -------
    R_value : float
        F at the final field.
    field : RadialField
        Minimiser rescaled to solve L v = sigma kappa v^{p-1}.

    Raises
    ------
    FlowStall
        If the energy stops decreasing before the Euler-Lagrange residual
        reaches ``el_tol`` or ``max_iter`` is exhausted.
    """
    if params.p <= 2.0:
        raise ValidationError("p = 2 has no minimiser; use hardy_limit_check")
    pc = problem_constants(params, quad_tol)
    C, k = pc.C_alpha, pc.sigma_ng * pc.kappa
    p = params.p
    dt = grid.spacing
    theta_L = grid_symbol(0, params.n, params.gamma, grid) + C
    eng = _Engine(theta_L, k, p, grid)
    if init is None:
        base = preset_profile(params, grid, C, k).values
        # deliberately lopsided start so that evenness is an outcome
        v = base * (1.0 + 0.3 * np.tanh(grid.t)) + 0.2 * np.roll(base, 7)
        # keep the skewed start inside the box
        T = grid.half_length
        v = v * _smoothstep((T - 1.0 - np.abs(grid.t)) / 3.0)
    else:
        v = np.array(init.values, dtype=float)
    if max(abs(v[0]), abs(v[1]), abs(v[-1])) > BOUNDARY_TOL * np.max(np.abs(v)):
        raise BoundaryLeak("initial field is not small at the grid ends")

    def normalize(w):
        return w / _lp_norm_p(w, p, dt) ** (1.0 / p)

    v = normalize(v)
    E = float(np.dot(v, eng.L(v)) * dt)
    tau = 1.0
    it = 0
    for it in range(1, max_iter + 1):
        lam = E
        w = eng.Linv(lam * np.abs(v) ** (p - 2.0) * v)
        while True:
            trial = normalize(v - tau * (v - w))
            E_new = float(np.dot(trial, eng.L(trial)) * dt)
            if E_new <= E * (1.0 + 1e-15):
                break
            tau *= 0.5
            if tau < 2.0 ** -30:
                raise FlowStall(f"energy cannot decrease further at step {it}")
        dec = E - E_new
        v, E = trial, E_new
        if dec <= tol * E:
            scaled = (E / k) ** (1.0 / (p - 2.0)) * v
            res = float(np.max(np.abs(eng.G(scaled))))
            if res <= el_tol * max(1.0, np.max(np.abs(scaled))):
                break
    else:
        raise FlowStall(f"gradient flow did not converge in {max_iter} steps")
    scaled = (E / k) ** (1.0 / (p - 2.0)) * v
    shift = _centroid(scaled, grid.t)
    scaled = _fourier_shift(scaled, grid, shift)
    field = RadialField(grid, scaled)
    field.check_boundary()
    return energy_F(field, params, C), field


# --------------------------------------------------------------------------
# Hardy endpoint

def _smoothstep(x):
    # C-infinity step: 0 for x <= 0, 1 for x >= 1
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(x > 0.0, np.exp(-1.0 / np.where(x > 0.0, x, 1.0)), 0.0)
        g = np.where(x < 1.0, np.exp(-1.0 / np.where(x < 1.0, 1.0 - x, 1.0)), 0.0)
    return f / (f + g)


def hardy_cutoff(grid: Grid, R: float, width: float = 1.0) -> RadialField:
    """Plateau of height one on |t| <= R, smoothly reaching zero at |t| = R + width."""
    return RadialField(grid, _smoothstep((R + width - np.abs(grid.t)) / width))


def hardy_limit_check(params: Parameters, grid: Grid, R_list, quad_tol: float = 1e-9):
    """Evaluate F on plateau cutoffs at the endpoint beta = alpha + gamma.

    Returns a list of (R, F(v_R)); the values should decrease toward 2 kappa.
    """
    if not params.is_hardy_endpoint:
        raise ValidationError("hardy_limit_check needs beta = alpha + gamma")
    out = []
    pc = problem_constants(params, quad_tol)
    for R in R_list:
        R = float(R)
        if R <= 0.0 or R + 1.0 > grid.half_length - 2.0:
            raise ValidationError(f"cutoff radius {R} does not fit in T={grid.half_length}")
        out.append((R, energy_F(hardy_cutoff(grid, R), params, pc.C_alpha)))
    return out


def richardson_limit(pairs, order: int = 1) -> float:
    """Extrapolate F(R) = L + a/R (+ b/R^2 ...) from the last ``order`` + 1 pairs."""
    pairs = list(pairs)[-(order + 1):]
    if len(pairs) < order + 1:
        raise ValidationError("not enough points for extrapolation")
    R = np.array([r for r, _ in pairs])
    F = np.array([f for _, f in pairs])
    A = np.vander(1.0 / R, order + 1, increasing=True)
    return float(np.linalg.solve(A, F)[0])


# --------------------------------------------------------------------------
# continuation in gamma

def _branch_solve(gamma, c0, p0, n, grid, v, tol):
    theta = symbol(0, n, gamma, grid.xi_fft) + c0
    eng = _Engine(theta, 1.0, p0, grid)
    v, res, it = eng.newton(_symmetrize(v, grid.mirror_index()), tol)
    _check_positive(v)
    return v, res, it


def continuation_gamma(c0: float, p0: float, gamma0: float, gamma1: float,
                       steps: int, grid: Grid, n: int = 3, tol: float = 1e-10):
    """Follow the even positive branch of P_g^(0) v + c0 v = v^{p0-1} in g.

    The first point is solved from a sech-power guess (Petviashvili, then
    Newton); later points use a secant predictor and a Newton corrector.  A
    failed step is halved up to ten times.

    Raises
    ------
    StepFailure
        When ten halvings do not rescue a step.
    """
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    if not (0.0 < gamma0 < 1.0 and 0.0 < gamma1 <= 1.0):
        raise ValidationError("gamma0 must lie in (0,1), gamma1 in (0,1]")
    if not 2.0 < p0 < 2.0 * n / (n - 2.0 * gamma0):
        raise ValidationError("need 2 < p0 < 2n/(n - 2 gamma0)")
    for g in np.linspace(gamma0, gamma1, 9):
        if symbol(0, n, g, 0.0) + c0 <= 0.0:
            raise ValidationError(f"Theta(0) + c0 <= 0 at gamma={g:.4g}")
    theta0 = symbol(0, n, gamma0, grid.xi_fft) + c0
    decay = math.sqrt(symbol(0, n, gamma0, 0.0) + c0)
    v0 = _local_soliton(grid.t, decay, 1.0, p0)
    v, res, it = _solve_equation(theta0, 1.0, p0, grid, v0, tol)
    _check_positive(v)
    points = [BranchPoint(gamma0, RadialField(grid, v), res, it)]
    if gamma1 == gamma0:
        return points
    h_nom = (gamma1 - gamma0) / steps
    g_cur = gamma0
    v_prev, g_prev = None, None
    h = h_nom
    while (gamma1 - g_cur) * np.sign(h_nom) > 1e-14:
        h = math.copysign(min(abs(h), abs(gamma1 - g_cur)), h_nom)
        for _ in range(11):
            g_new = g_cur + h
            if v_prev is not None:
                pred = v + (v - v_prev) * (h / (g_cur - g_prev))
            else:
                pred = v
            try:
                v_new, res, it = _branch_solve(g_new, c0, p0, n, grid, pred, tol)
                break
            except (NewtonStall, PositivityLoss):
                h *= 0.5
        else:
            raise StepFailure(f"continuation step failed near gamma={g_cur:.6g}",
                              gamma=g_cur)
        field = RadialField(grid, v_new)
        field.check_boundary()
        v_prev, g_prev = v, g_cur
        v, g_cur = v_new, g_new
        points.append(BranchPoint(g_new, field, res, it))
        h = h_nom
    return points


def branch_bounds(points, c0: float, p0: float, n: int = 3) -> dict:
    """max/min ratios along the branch of int v^2, int v^{p0} and the quadratic form."""
    l2, lp, qf = [], [], []
    for bp in points:
        v = bp.field.values
        dt = bp.field.grid.spacing
        th = symbol(0, n, bp.gamma, bp.field.grid.xi_fft) + c0
        l2.append(float(np.sum(v * v) * dt))
        lp.append(float(np.sum(np.abs(v) ** p0) * dt))
        qf.append(float(np.dot(v, apply_symbol(v, th)) * dt))
    ratio = lambda x: max(x) / min(x)
    return {"l2": ratio(l2), "lp": ratio(lp), "quadratic": ratio(qf)}
