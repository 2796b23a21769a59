"""Weighted numerical radii and seminorms for matrices under a positive semidefinite weight."""
from .checks import CHECKERS, Inputs, ValueChain, check
from .ensembles import KINDS, EnsembleConfig, sample, sample_weight
from .linalg import DEFAULT_TOL, HermitianEigen, Tolerances, hermitian_eig, operator_norm, psd_functions
from .radius import (
    RangeCloud,
    WeightPair,
    a_numerical_radius,
    check_alt_formulas,
    classical_numerical_radius,
    numerical_range_cloud,
    weighted_parts,
    weighted_radius,
)
from .spectral import DistanceResult, IndexEstimate, a_spectral_radius, character_values, distance_to_scalars, numerical_index
from .suite import SuiteReport, kappa_ratio_search, run_suite, tightness_search
from .theta import ThetaOptimum, sup_over_theta
from .weighted import (
    SeminormValue,
    Weight,
    a_adjoint,
    a_seminorm,
    compress,
    is_a_positive,
    is_a_self_adjoint,
    is_member,
    make_weight,
)

__version__ = "0.1.0"
