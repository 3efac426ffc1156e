"""Linearisation about a ground state, low spectrum, Morse index and lambda_1.

The linearised operator in spherical-harmonic mode m is

    L^(m) phi = P^(m) phi + V phi,   V = C(alpha) - (p-1) sigma kappa v^{p-2},

a Fourier multiplier plus a diagonal potential.  On the periodic grid its
matrix is circulant plus diagonal.  Because ``v`` is even, the reflection
t -> -t commutes with L^(m) and the matrix splits into an even and an odd
block of roughly half the size; both blocks are solved densely.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.linalg import LinAlgError, circulant, eigh

from ._parity import (circulant_column, even_block, from_even, from_odd,
                      odd_block)
from .constants import Parameters
from .errors import CKNError, EigDivergence, ValidationError
from .solver import SolveResult, solve_ground_state
from .spectral import (Grid, RadialField, apply_symbol, decay_rate_fit,
                       grid_symbol, indicial_roots, spectral_derivative)

__all__ = [
    "LinearizedOperator",
    "SpectrumReport",
    "RegionSample",
    "assemble_linearized",
    "lowest_eigs",
    "higher_mode_certificate",
    "morse_index",
    "rayleigh_bound",
    "lambda1_sign",
    "region_sweep",
    "MARGINAL_TOL",
]

MARGINAL_TOL = 1e-6
DENSE_LIMIT = 4096
MAX_EIGS = 10


@dataclass(frozen=True, eq=False)
class LinearizedOperator:
    """L^(m) = P^(m) + V about ``base_field``.

    ``potential`` is V sampled on the grid; ``theta`` is Theta^(m) in FFT
    order.
    """

    mode: int
    params: Parameters
    grid: Grid
    potential: np.ndarray
    base_field: RadialField
    theta: np.ndarray = dc_field(repr=False, default=None)
    C_alpha: float = 0.0
    normalization: float = 0.0

    def apply(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        return apply_symbol(w, self.theta) + self.potential * w

    def scale(self) -> float:
        """Crude operator norm: max |Theta| + max |V|."""
        return float(np.max(np.abs(self.theta)) + np.max(np.abs(self.potential)))

    def matrix(self) -> np.ndarray:
        """Dense symmetric matrix on the grid (circulant + diagonal)."""
        N = self.grid.points
        if N > DENSE_LIMIT:
            raise ValidationError(f"dense realisation limited to N <= {DENSE_LIMIT}")
        A = circulant(circulant_column(self.theta))
        A[np.diag_indices(N)] += self.potential
        return 0.5 * (A + A.T)

    def sector_matrices(self):
        """(even block, odd block) in the orthonormal reflection basis.

        Even unknowns sit at indices 0..N/2 (0 and N/2 are fixed by the
        reflection), odd unknowns at 1..N/2-1.  Built without forming the
        full matrix.
        """
        col = circulant_column(self.theta)
        return even_block(col, self.potential), odd_block(col, self.potential)

    def sector_bases(self):
        """Orthonormal columns Q_even (N x N/2+1) and Q_odd (N x N/2-1)."""
        N = self.grid.points
        h = N // 2
        j = np.arange(1, h)
        r = 1.0 / math.sqrt(2.0)
        Qe = np.zeros((N, h + 1))
        Qe[0, 0] = 1.0
        Qe[h, h] = 1.0
        Qe[j, j] = r
        Qe[N - j, j] = r
        Qo = np.zeros((N, h - 1))
        Qo[j, j - 1] = r
        Qo[N - j, j - 1] = -r
        return Qe, Qo


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Lowest eigenvalues of one mode.

    The first six fields are the serialised schema, in this order.
    ``kernel_residual`` is None except for mode 0.
    """

    mode: int
    eigenvalues: tuple
    ground_eigenfunction_sign_definite: bool
    parity_tags: tuple
    kernel_residual: float | None
    morse_index: int
    spectral_gap: float = math.nan
    kernel_eigenvalue: float | None = None
    kernel_alignment: float | None = None
    operator_scale: float = math.nan
    variational_defect: float = math.nan
    eigenvectors: np.ndarray | None = dc_field(default=None, repr=False)

    SCHEMA = ("mode", "eigenvalues", "ground_eigenfunction_sign_definite",
              "parity_tags", "kernel_residual", "morse_index", "spectral_gap",
              "kernel_eigenvalue", "kernel_alignment", "operator_scale",
              "variational_defect")

    def as_dict(self) -> dict:
        out = {}
        for key in self.SCHEMA:
            val = getattr(self, key)
            out[key] = list(val) if isinstance(val, tuple) else val
        return out


def assemble_linearized(m: int, solve: SolveResult, params: Parameters) -> LinearizedOperator:
    """Build L^(m) about the ground state carried by ``solve``."""
    if m < 0 or int(m) != m:
        raise ValidationError("mode must be a non-negative integer")
    if solve.params is not None and solve.params != params:
        raise ValidationError("solve result belongs to different parameters")
    field = solve.field
    grid = field.grid
    v = field.values
    # enforce exact evenness so the parity split is exact
    v = 0.5 * (v + v[grid.mirror_index()])
    k = solve.normalization
    p = params.p
    V = solve.C_alpha - (p - 1.0) * k * np.abs(v) ** (p - 2.0)
    theta = grid_symbol(int(m), params.n, params.gamma, grid)
    return LinearizedOperator(mode=int(m), params=params, grid=grid, potential=V,
                              base_field=field, theta=theta, C_alpha=solve.C_alpha,
                              normalization=k)


def _sector_eigs(M, k):
    k = min(k, M.shape[0])
    try:
        w, U = eigh(M, subset_by_index=[0, k - 1], driver="evr")
    except (LinAlgError, ValueError) as exc:
        raise EigDivergence(f"dense eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigDivergence("eigensolver returned non-finite values")
    return w, U


def _cosine(a, b):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(abs(np.dot(a, b)) / (na * nb))


def lowest_eigs(op: LinearizedOperator, k: int = 4, tol: float = MARGINAL_TOL) -> SpectrumReport:
    """k smallest eigenvalues of ``op`` from the even and odd blocks.

    Eigenvalues below ``-tol`` count toward ``morse_index``.  For mode 0
    the report also carries ||L v_t|| / ||v_t||, the odd eigenvalue closest to
    zero and the cosine similarity of its eigenvector with v_t.

    Raises
    ------
    EigDivergence
        If the dense solver fails.
    """
    if not 1 <= k <= MAX_EIGS:
        raise ValidationError(f"k must lie in 1..{MAX_EIGS}")
    even, odd = op.sector_matrices()
    we, Ue = _sector_eigs(even, k)
    wo, Uo = _sector_eigs(odd, k)
    vals = np.concatenate([we, wo])
    vecs = np.column_stack([from_even(u) for u in Ue.T] + [from_odd(u) for u in Uo.T])
    tags = ["even"] * len(we) + ["odd"] * len(wo)
    order = np.argsort(vals, kind="stable")[:k]
    vals = vals[order]
    vecs = vecs[:, order]
    tags = tuple(tags[i] for i in order)

    g = vecs[:, 0]
    peak = g[np.argmax(np.abs(g))]
    g = g * math.copysign(1.0, peak)
    sign_def = bool(np.min(g) > -1e-10 * np.max(g))
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else math.nan

    kres = kval = kcos = None
    if op.mode == 0:
        v = op.base_field.values
        vt = spectral_derivative(v, op.grid)
        kres = float(np.linalg.norm(op.apply(vt)) / np.linalg.norm(vt))
        i0 = int(np.argmin(np.abs(wo)))
        kval = float(wo[i0])
        kcos = _cosine(from_odd(Uo[:, i0]), vt)
    morse = int(np.sum(vals < -tol))
    # Rayleigh quotients of the returned pairs, with the FFT action
    rq = [float(np.dot(u, op.apply(u)) / np.dot(u, u)) for u in vecs.T]
    vdef = float(max(abs(q - lam) for q, lam in zip(rq, vals)))
    return SpectrumReport(mode=op.mode, eigenvalues=tuple(float(x) for x in vals),
                          ground_eigenfunction_sign_definite=sign_def,
                          parity_tags=tags, kernel_residual=kres, morse_index=morse,
                          spectral_gap=gap, kernel_eigenvalue=kval,
                          kernel_alignment=kcos, operator_scale=op.scale(),
                          variational_defect=vdef,
                          eigenvectors=vecs)


def higher_mode_certificate(solve: SolveResult, params: Parameters) -> dict:
    """Lower bound on the spectrum of L^(m) for every m >= 2.

    The cheap bound Theta^(2)(0) + C - (p-1) sigma kappa max v^{p-2} is tried
    first.  When it is negative, the smallest eigenvalue of L^(2) is used
    instead; it bounds all m >= 2 provided Theta^(m) >= Theta^(2) pointwise
    on the grid, which is checked for m = 3 and reported.
    """
    grid = solve.field.grid
    v = solve.field.values
    th2 = grid_symbol(2, params.n, params.gamma, grid)
    crude = float(np.min(th2) + solve.C_alpha
                  - (params.p - 1.0) * solve.normalization * np.max(np.abs(v)) ** (params.p - 2.0))
    out = {"crude_bound": crude, "method": "symbol", "bound": crude,
           "ordering_checked": True}
    if crude < 0.0:
        op2 = assemble_linearized(2, solve, params)
        even, odd = op2.sector_matrices()
        lam = min(_sector_eigs(even, 1)[0][0], _sector_eigs(odd, 1)[0][0])
        th3 = grid_symbol(3, params.n, params.gamma, grid)
        out.update(method="mode-2 eigenvalue", bound=float(lam),
                   ordering_checked=bool(np.all(th3 >= th2)))
    out["certified"] = bool(out["bound"] > -MARGINAL_TOL and out["ordering_checked"])
    return out


def morse_index(solve: SolveResult, params: Parameters, k: int = 4) -> dict:
    """Negative eigenvalues over modes 0 and 1 plus the m >= 2 certificate.

    Mode m has multiplicity dim H_m of the sphere harmonics; only the count
    of distinct radial eigenvalues is returned per mode, which is what the
    index-one statement refers to.
    """
    r0 = lowest_eigs(assemble_linearized(0, solve, params), k)
    r1 = lowest_eigs(assemble_linearized(1, solve, params), k)
    cert = higher_mode_certificate(solve, params)
    extra = 0 if cert["certified"] else None
    total = r0.morse_index + r1.morse_index + (extra or 0)
    ordering = r0.eigenvalues[0] < r1.eigenvalues[0]
    if cert["method"] != "symbol":
        ordering = ordering and r1.eigenvalues[0] <= cert["bound"] + MARGINAL_TOL
    return {"mode0": r0, "mode1": r1, "certificate": cert, "total": total,
            "certified": cert["certified"], "mode_ordering_holds": bool(ordering)}


def rayleigh_bound(solve: SolveResult, params: Parameters) -> tuple[float, float]:
    """(I_p, I_p - (p-2) C) with phi = v, evaluated in Fourier space.

    I_p = sum (Theta^(1) - (p-1) Theta^(0)) |v_hat|^2 / sum |v_hat|^2.
    """
    grid = solve.field.grid
    vh2 = np.abs(np.fft.fft(solve.field.values)) ** 2
    th0 = grid_symbol(0, params.n, params.gamma, grid)
    th1 = grid_symbol(1, params.n, params.gamma, grid)
    Ip = float(np.sum((th1 - (params.p - 1.0) * th0) * vh2) / np.sum(vh2))
    return Ip, Ip - (params.p - 2.0) * solve.C_alpha


def _verdict(lam, tol=MARGINAL_TOL):
    if lam < -tol:
        return "SymmetryBroken"
    if abs(lam) <= tol:
        return "Marginal"
    return "RadialStable"


def lambda1_sign(solve: SolveResult, params: Parameters, tol: float = MARGINAL_TOL):
    """Lowest mode-1 eigenvalue, its Rayleigh upper bound and the verdict.

    Returns
    -------
    lambda1 : float
    rayleigh_bound : float
        I_p - (p-2) C(alpha); lambda1 never exceeds it by more than 1e-8.
    verdict : str
        "SymmetryBroken" if lambda1 < -tol, "Marginal" if |lambda1| <= tol,
        otherwise "RadialStable".
    """
    # the lowest eigenfunction is positive, hence even: one block suffices
    even, _ = assemble_linearized(1, solve, params).sector_matrices()
    lam = float(_sector_eigs(even, 1)[0][0])
    _, bound = rayleigh_bound(solve, params)
    return lam, bound, _verdict(lam, tol)


# --------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class RegionSample:
    alpha: float
    beta: float
    p: float
    R: float
    lambda0: float
    lambda1: float
    verdict: str
    sigma0: float
    decay_fit: float
    converged: bool
    rayleigh_bound: float = math.nan
    residual: float = math.nan
    flags: tuple = ()
    error: str = ""

    CSV_FIELDS = ("alpha", "beta", "p", "R", "lambda0", "lambda1", "verdict",
                  "sigma0", "decay_fit", "converged")


def _auto_window(field, hi=1e-4, lo=1e-10):
    """Fit window on t > 0 between v = hi*max and v = lo*max."""
    t, v = field.grid.t, field.values
    peak = np.max(v)
    pos = t > 0.0
    limit = field.grid.half_length - 2.0
    a = t[pos & (v < hi * peak)]
    b = t[pos & (v < lo * peak)]
    if a.size == 0:
        return None
    t0 = float(a[0])
    t1 = float(b[0]) if b.size else limit
    t1 = min(t1, limit)
    if t1 - t0 < 1.0:
        return None
    return t0, t1


def _sample(params, grid, init, tol, quad_tol):
    p = params.p
    try:
        sigma0 = indicial_roots(params, 1)[0].sigma
    except CKNError:
        sigma0 = math.nan
    try:
        res = solve_ground_state(params, grid, init=init, tol=tol, quad_tol=quad_tol)
    except CKNError as exc:
        if isinstance(init, RadialField):
            try:
                res = solve_ground_state(params, grid, tol=tol, quad_tol=quad_tol)
            except CKNError as exc2:
                return _failed(params, sigma0, exc2), None
        else:
            return _failed(params, sigma0, exc), None
    try:
        even0, _ = assemble_linearized(0, res, params).sector_matrices()
        lam0 = float(_sector_eigs(even0, 1)[0][0])
        lam1, bound, verdict = lambda1_sign(res, params)
    except CKNError as exc:
        return _failed(params, sigma0, exc, res), res
    win = _auto_window(res.field)
    fit = math.nan
    if win is not None:
        try:
            fit = decay_rate_fit(res.field, win)[0]
        except CKNError:
            pass
    return RegionSample(alpha=params.alpha, beta=params.beta, p=p, R=res.energy,
                        lambda0=lam0, lambda1=lam1, verdict=verdict, sigma0=sigma0,
                        decay_fit=fit, converged=True, rayleigh_bound=bound,
                        residual=res.residual, flags=res.flags), res


def _failed(params, sigma0, exc, res=None):
    return RegionSample(alpha=params.alpha, beta=params.beta, p=params.p,
                        R=res.energy if res is not None else math.nan,
                        lambda0=math.nan, lambda1=math.nan, verdict="Failed",
                        sigma0=sigma0, decay_fit=math.nan, converged=False,
                        residual=res.residual if res is not None else math.nan,
                        error=f"{exc.kind}: {exc}")


def _row(alpha, betas, base, grid, tol, quad_tol):
    out = []
    prev = None
    for beta in betas:
        try:
            params = base.replace(alpha=float(alpha), beta=float(beta))
        except CKNError as exc:
            raise ValidationError(f"sample (alpha={alpha}, beta={beta}) is not admissible: {exc}")
        sample, res = _sample(params, grid, prev if prev is not None else "preset",
                              tol, quad_tol)
        if res is not None:
            prev = res.field
        out.append(sample)
    return out


def _row_star(args):
    return _row(*args)


def region_sweep(alpha_grid, beta_rule, base: Parameters, grid: Grid, jobs: int = 1,
                 tol: float = 1e-10, quad_tol: float = 1e-9):
    """Ground state, lambda_0, lambda_1 and decay data over an (alpha, beta) set.

    Parameters
    ----------
    alpha_grid : sequence of float
    beta_rule : callable or sequence
        Either ``beta_rule(alpha) -> list of beta`` or one list of betas per
        alpha.
    jobs : int
        Worker processes; each alpha row is one task, warm-started along its
        betas.  Output order is always the input order.

    Returns
    -------
    list of RegionSample
        Failed solves appear with ``converged=False`` and an error string.
    """
    alphas = [float(a) for a in alpha_grid]
    if callable(beta_rule):
        rows = [list(beta_rule(a)) for a in alphas]
    else:
        rows = [list(b) for b in beta_rule]
        if len(rows) != len(alphas):
            raise ValidationError("need one beta list per alpha")
    # validate everything before doing any work
    for a, bs in zip(alphas, rows):
        for b in bs:
            base.replace(alpha=a, beta=float(b))
    tasks = [(a, bs, base, grid, tol, quad_tol) for a, bs in zip(alphas, rows)]
    jobs = max(1, int(jobs))
    if jobs == 1 or len(tasks) <= 1:
        results = [_row_star(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks), os.cpu_count() or 1)) as ex:
            results = list(ex.map(_row_star, tasks))
    return [s for row in results for s in row]
