"""Weighted Hankel matrices with tridiagonal commutants: explicit spectral
representations and a machine-checkable verification suite.
"""

from .operators import (
    FamilySpec,
    H1Spec,
    H2Spec,
    H3Spec,
    H4Spec,
    JacobiParams,
    carleman_partial_sum,
    commutant_expansion_check,
    commutation_residual,
    closed_form_entry,
    hankel_symbol,
    jacobi_params,
    materialize,
    max_commutation_residual,
    weights,
)
from .orthopoly import (
    DualHahn,
    Hermite,
    Laguerre,
    Meixner,
    MeixnerPollaczek,
    eval_classical,
    eval_orthonormal_sequence,
    orthonormality_check,
    orthonormal_from_classical,
    spectral_jacobi,
)
from .special import (
    LogReal,
    binomial_general,
    gamma_abs_sq,
    hyp_terminating,
    ln_gamma,
    pochhammer,
)
from .spectral import (
    ACMeasure,
    DiscreteMeasure,
    InconclusiveError,
    SpectralRep,
    dense_sym_eigen,
    functional_equation_residual,
    gauss_quadrature,
    properness_integral,
    spectral_rep,
    sym_tridiag_eigen,
    truncated_spectrum_report,
)
from .identities import (
    IdentityReport,
    determinant_identity,
    dual_hahn_sum_identity,
    h1_trace_class_checks,
    hermite_integral_identity,
    laguerre_integral_identity,
    meixner_sum_identity,
    mp_gamma4_integral_identity,
    mp_integral_identity,
    trace_identities,
)

__version__ = "0.1.0"
