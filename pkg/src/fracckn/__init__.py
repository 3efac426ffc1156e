"""Pseudospectral tools for weighted fractional Sobolev extremals on the cylinder.

Modules
-------
specfun     log-Gamma, Gamma ratios and the Gauss hypergeometric function
constants   admissible parameters, kappa, C(alpha) and related constants
spectral    grids, Fourier symbols Theta^(m), operators and indicial roots
solver      ground states, radial minimisation, Hardy endpoint, continuation
stability   linearised spectra, Morse index and the sign of lambda_1
cli         command-line front end
"""
from .constants import ProblemConstants, Parameters, problem_constants
from .errors import CKNError, ComputationError, ConfigError
from .solver import SolveResult, minimize_radial, solve_ground_state
from .spectral import Grid, RadialField, apply_Pm, indicial_roots, symbol
from .specfun import BACKEND
from .stability import lambda1_sign, lowest_eigs, assemble_linearized, region_sweep

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CKNError",
    "ComputationError",
    "ConfigError",
    "Grid",
    "Parameters",
    "ProblemConstants",
    "RadialField",
    "SolveResult",
    "apply_Pm",
    "assemble_linearized",
    "indicial_roots",
    "lambda1_sign",
    "lowest_eigs",
    "minimize_radial",
    "problem_constants",
    "region_sweep",
    "solve_ground_state",
    "symbol",
]
