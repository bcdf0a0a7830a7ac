"""Finite-size corrections for the mean-field attractive monomer-dimer model."""

from mdfs.params import (
    A_CRITICAL,
    CoexistenceError,
    CriticalPointError,
    FixedPoint,
    ModelParams,
    NoRootError,
    critical_point,
    from_jh,
    solve_self_consistency,
    stationary_bounds,
)
from mdfs.derivatives import DerivPack, MomentTable, build_deriv_pack, build_moment_table, f_value, g_value
from mdfs.laplace import CorrectionSet, chi_star_closed_form, coeff_K, coeff_L, coeff_M, corrections
from mdfs.exact import ExactObservables, correction_extrapolation, log_matching_count, observables

__all__ = [
    "A_CRITICAL",
    "CoexistenceError",
    "CorrectionSet",
    "CriticalPointError",
    "DerivPack",
    "ExactObservables",
    "FixedPoint",
    "ModelParams",
    "MomentTable",
    "NoRootError",
    "build_deriv_pack",
    "build_moment_table",
    "chi_star_closed_form",
    "coeff_K",
    "coeff_L",
    "coeff_M",
    "correction_extrapolation",
    "corrections",
    "critical_point",
    "f_value",
    "from_jh",
    "g_value",
    "log_matching_count",
    "observables",
    "solve_self_consistency",
    "stationary_bounds",
]
