import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracckn.constants import Parameters
from fracckn.errors import ValidationError
from fracckn.solver import solve_ground_state
from fracckn.spectral import Grid, RadialField, grid_symbol
from fracckn.stability import (
    MARGINAL_TOL, LinearizedOperator, RegionSample, SpectrumReport, assemble_linearized,
    higher_mode_certificate, lambda1_sign, lowest_eigs, morse_index, rayleigh_bound,
    region_sweep)
from fracckn.validation import _grid_for


def random_operator(seed, N=128, m=1):
    rng = np.random.default_rng(seed)
    grid = Grid(10.0, N)
    V = rng.standard_normal(N)
    V = 0.5 * (V + V[grid.mirror_index()])
    base = RadialField(grid, np.exp(-grid.t ** 2))
    P = Parameters(3, 0.5, 0.0, 0.0)
    return LinearizedOperator(mode=m, params=P, grid=grid, potential=V, base_field=base,
                              theta=grid_symbol(m, 3, 0.5, grid))


# -- parity blocks --------------------------------------------------------------------

@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 3))
def test_parity_blocks_reassemble_full_matrix(seed, m):
    op = random_operator(seed, m=m)
    A = op.matrix()
    Qe, Qo = op.sector_bases()
    even, odd = op.sector_matrices()
    assert np.allclose(Qe.T @ Qe, np.eye(Qe.shape[1]), atol=1e-15)
    assert np.allclose(Qe.T @ Qo, 0.0, atol=1e-15)
    scale = np.max(np.abs(A))
    assert np.max(np.abs(Qe.T @ A @ Qe - even)) < 1e-13 * scale
    assert np.max(np.abs(Qo.T @ A @ Qo - odd)) < 1e-13 * scale
    assert np.max(np.abs(Qe.T @ A @ Qo)) < 1e-13 * scale


def test_block_spectrum_equals_full_spectrum():
    op = random_operator(11)
    full = np.linalg.eigvalsh(op.matrix())
    even, odd = op.sector_matrices()
    split = np.sort(np.concatenate([np.linalg.eigvalsh(even), np.linalg.eigvalsh(odd)]))
    assert np.allclose(full, split, atol=1e-11 * np.max(np.abs(full)))
    rep = lowest_eigs(op, k=6)
    assert np.allclose(rep.eigenvalues, full[:6], atol=1e-11 * np.max(np.abs(full)))


def test_matrix_matches_apply():
    op = random_operator(5, m=2)
    w = np.random.default_rng(1).standard_normal(op.grid.points)
    A = op.matrix()
    assert np.allclose(A, A.T)
    assert np.allclose(A @ w, op.apply(w), atol=1e-11 * op.scale())


def test_dense_limit():
    grid = Grid(10.0, 8192)
    op = LinearizedOperator(mode=0, params=Parameters(3, 0.5, 0.0, 0.0), grid=grid,
                            potential=np.zeros(8192),
                            base_field=RadialField(grid, np.exp(-grid.t ** 2)),
                            theta=grid_symbol(0, 3, 0.5, grid))
    with pytest.raises(ValidationError):
        op.matrix()


# -- assembled operators ------------------------------------------------------------------

@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.3, 0.4), (-0.9, -0.89), (0.0, 0.25),
                                        (-0.5, -0.2)])
def test_potential_tends_to_C_at_grid_ends(alpha, beta):
    # the potential decays like v^{p-2}; for p close to 2 the floating-point
    # noise floor of v bounds how small it can get at the ends
    P = Parameters(3, 0.5, alpha, beta)
    res = solve_ground_state(P, _grid_for(P, potential_tol=1e-6))
    op = assemble_linearized(0, res, P)
    assert np.max(np.abs(op.potential[[0, 1, -1]] - res.C_alpha)) <= 1e-6


def test_assemble_validation(bubble_solve):
    P, res = bubble_solve
    with pytest.raises(ValidationError):
        assemble_linearized(-1, res, P)
    with pytest.raises(ValidationError):
        assemble_linearized(0, res, P.replace(beta=0.1))


@pytest.mark.parametrize("fixture", ["bubble_solve", "radial_solve", "broken_solve"])
def test_quadratic_form_on_ground_state(fixture, request):
    # L^(0) v = -(p-2) k v^{p-1}, hence <v, L v> = -(p-2) k int v^p
    P, res = request.getfixturevalue(fixture)
    op = assemble_linearized(0, res, P)
    v = res.field.values
    lhs = np.dot(v, op.apply(v))
    rhs = -(P.p - 2) * res.normalization * np.sum(np.abs(v) ** P.p)
    assert lhs == pytest.approx(rhs, rel=1e-8)


@pytest.mark.parametrize("fixture", ["bubble_solve", "radial_solve", "broken_solve"])
def test_mode0_spectrum(fixture, request):
    P, res = request.getfixturevalue(fixture)
    rep = lowest_eigs(assemble_linearized(0, res, P))
    assert rep.eigenvalues[0] < 0
    assert rep.morse_index == 1
    assert rep.ground_eigenfunction_sign_definite
    assert rep.parity_tags[0] == "even"
    # translation mode t -> v'(t) is an odd kernel element
    assert rep.kernel_residual < 1e-7
    assert abs(rep.kernel_eigenvalue) < 1e-9
    assert rep.kernel_alignment > 1 - 1e-9
    assert rep.variational_defect < 1e-10 * rep.operator_scale
    assert list(rep.eigenvalues) == sorted(rep.eigenvalues)


def test_report_schema(bubble_solve):
    P, res = bubble_solve
    d = lowest_eigs(assemble_linearized(1, res, P), k=3).as_dict()
    assert tuple(d) == SpectrumReport.SCHEMA
    assert d["kernel_residual"] is None
    assert len(d["eigenvalues"]) == 3
    with pytest.raises(ValidationError):
        lowest_eigs(assemble_linearized(1, res, P), k=11)


def test_mode1_lowest_eigenfunction_positive(radial_solve):
    P, res = radial_solve
    rep = lowest_eigs(assemble_linearized(1, res, P))
    assert rep.ground_eigenfunction_sign_definite and rep.parity_tags[0] == "even"


# -- lambda_1 and the Morse index -------------------------------------------------------------

@pytest.mark.parametrize("fixture,verdict", [("bubble_solve", "Marginal"),
                                             ("radial_solve", "RadialStable"),
                                             ("broken_solve", "SymmetryBroken")])
def test_lambda1_verdicts(fixture, verdict, request):
    P, res = request.getfixturevalue(fixture)
    lam, bound, v = lambda1_sign(res, P)
    assert v == verdict
    assert lam <= bound + 1e-8
    full = lowest_eigs(assemble_linearized(1, res, P), k=1).eigenvalues[0]
    assert lam == pytest.approx(full, abs=1e-10 * max(1.0, abs(full)))


def test_bubble_mode1_kernel_is_conformal(bubble_solve):
    # at alpha = beta = 0 the mode-1 kernel comes from dilations about a
    # point off the origin
    P, res = bubble_solve
    assert abs(lambda1_sign(res, P)[0]) < 1e-10


def test_rayleigh_bound_definition(radial_solve):
    P, res = radial_solve
    Ip, b = rayleigh_bound(res, P)
    assert b == pytest.approx(Ip - (P.p - 2) * res.C_alpha, rel=1e-14)
    op1 = assemble_linearized(1, res, P)
    v = res.field.values
    # phi = v in the mode-1 quadratic form gives exactly the bound
    assert np.dot(v, op1.apply(v)) / np.dot(v, v) == pytest.approx(b, rel=1e-8)


@pytest.mark.parametrize("fixture,total,certified", [("bubble_solve", 1, True),
                                                     ("radial_solve", 1, True),
                                                     ("broken_solve", 2, False)])
def test_morse_index(fixture, total, certified, request):
    P, res = request.getfixturevalue(fixture)
    m = morse_index(res, P)
    assert m["total"] == total
    assert m["certified"] is certified
    assert m["mode_ordering_holds"]


def test_higher_mode_certificate_methods(radial_solve, broken_solve):
    c = higher_mode_certificate(radial_solve[1], radial_solve[0])
    assert c["method"] == "symbol" and c["certified"]
    c = higher_mode_certificate(broken_solve[1], broken_solve[0])
    assert c["method"] == "mode-2 eigenvalue"
    assert c["crude_bound"] <= c["bound"] < -MARGINAL_TOL
    assert not c["certified"]


# -- sweeps -------------------------------------------------------------------------------------

def test_single_point_sweep_matches_direct(radial_solve):
    P, res = radial_solve
    [s] = region_sweep([P.alpha], [[P.beta]], P, res.field.grid)
    lam, bound, verdict = lambda1_sign(res, P)
    assert s.converged and s.verdict == verdict
    assert s.lambda1 == pytest.approx(lam, rel=1e-9)
    assert s.rayleigh_bound == pytest.approx(bound, rel=1e-9)
    assert s.R == pytest.approx(res.energy, rel=1e-10)
    assert s.decay_fit == pytest.approx(s.sigma0, rel=1e-2)


def test_sweep_records_failures():
    base = Parameters(3, 0.5, -0.9, -0.9)
    out = region_sweep([-0.9], [[-0.89, -0.85]], base, Grid(20.0, 1024))
    assert [s.beta for s in out] == [-0.89, -0.85]
    bad = out[0]
    assert not bad.converged and bad.verdict == "Failed"
    assert bad.error.startswith("PositivityLoss")
    assert math.isnan(bad.lambda1)
    assert set(RegionSample.CSV_FIELDS) <= set(bad.__dataclass_fields__)


def test_sweep_parallel_matches_serial():
    base = Parameters(3, 0.5, -0.5, -0.5)
    grid = Grid(30.0, 1024)
    rule = lambda a: [a + 0.2, a + 0.3]
    s1 = region_sweep([-0.6, -0.5], rule, base, grid, jobs=1)
    s2 = region_sweep([-0.6, -0.5], rule, base, grid, jobs=2)
    assert [x.lambda1 for x in s1] == [x.lambda1 for x in s2]


def test_sweep_rejects_inadmissible_before_work():
    base = Parameters(3, 0.5, 0.0, 0.0)
    with pytest.raises(ValidationError):
        region_sweep([0.0], [[0.6]], base, Grid(20.0, 256))
    with pytest.raises(ValidationError):
        region_sweep([0.0, 0.1], [[0.1]], base, Grid(20.0, 256))


def test_threshold_with_numerical_M(broken_solve):
    # M = |I_p| from the computed ground state places h(alpha) inside the band,
    # and the sample below it is symmetry broken
    from fracckn.constants import h_alpha, h_alpha_status
    P, res = broken_solve
    Ip, _ = rayleigh_bound(res, P)
    h = h_alpha(P, abs(Ip))
    assert h_alpha_status(P, abs(Ip)) == "inside"
    assert P.alpha < P.beta < h
    assert lambda1_sign(res, P)[0] < 0
