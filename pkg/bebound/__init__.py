"""
bebound
Computable Berry-Esseen and Prawitz smoothing bounds with exact oracles
"""

__version__ = "1.0.0"

from bebound.bounds import (
    cdf_bounds,
    cdf_bounds_by_reflection,
    default_T,
    e_rat_bounds,
    fix_correction,
    h_triple_prime_check,
    positive_part_bounds,
    psi,
    rosenthal_ub,
    small_n_nagaev,
    tail_moment_bound,
)
from bebound.cf_core import CharFn, DiscreteDist, NormalLaw, make_standardized_iid_sum, parse_dist_spec
from bebound.errors import (
    AuditFailure,
    BoundError,
    ConfigError,
    DistSpecError,
    DomainError,
    QuadratureError,
    SupportBlowupError,
    SymmetryError,
)
from bebound.filters import PRAWITZ, SmoothingFilter, c2p_constant
from bebound.oracle import CONSTANTS, convolve_iid, delta_profile, normal_cdf
from bebound.pv_transform import g_transform, sine_integral

__all__ = [
    "AuditFailure", "BoundError", "CONSTANTS", "CharFn", "ConfigError", "DiscreteDist", "DistSpecError",
    "DomainError", "NormalLaw", "PRAWITZ", "QuadratureError", "SmoothingFilter", "SupportBlowupError",
    "SymmetryError", "c2p_constant", "cdf_bounds", "cdf_bounds_by_reflection", "convolve_iid", "default_T",
    "delta_profile", "e_rat_bounds", "fix_correction", "g_transform", "h_triple_prime_check",
    "make_standardized_iid_sum", "normal_cdf", "parse_dist_spec", "positive_part_bounds", "psi",
    "rosenthal_ub", "sine_integral", "small_n_nagaev", "tail_moment_bound",
]
