"""Exact and numeric workbench for theta series of even positive-definite
quadratic forms: q-expansions with vector insertions, quasimodular
completions, generating series in a formal variable, and a numeric
harness for the transformation laws."""

from .arith import GaussianRational, Rational, bernoulli, divisor_sigma, kronecker_symbol, pairing_coeff
from .jacobi_like import (
    JacobiLikeForm,
    completed_theta,
    cusp_combination,
    e2_exponential,
    theta_generating,
    verify_root_identity,
)
from .lattice import (
    CATALOG,
    CongruenceClass,
    EnumerationBudgetError,
    InsertionVector,
    InvalidFormError,
    QuadraticForm,
    catalog_form,
    enumerate_congruence,
    enumerate_upto,
    first_root,
    gauss_sum,
    load_form,
    minimal_vector,
    unit_insertion_vector,
)
from .modforms import (
    TauPoint,
    ThetaSpec,
    eisenstein_e2,
    eisenstein_e2_numeric,
    eisenstein_e2k,
    theta_dual_numeric,
    theta_expand,
    theta_numeric,
    theta_offset_numeric,
)
from .qseries import FracQSeries, PrecisionError, XSeries
from .verify import (
    Gamma0Matrix,
    LawReport,
    LAW_IDS,
    check_congruence_modularity,
    check_cusp_expansion,
    check_e2_quasimodularity,
    check_gauss_closed_form,
    check_gauss_orthogonality,
    check_generating_modularity,
    check_inversion_law,
    check_poisson_inversion,
    check_rescale,
    check_translation,
    run_campaign,
    sample_gamma0,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CongruenceClass",
    "EnumerationBudgetError",
    "FracQSeries",
    "Gamma0Matrix",
    "GaussianRational",
    "InsertionVector",
    "InvalidFormError",
    "JacobiLikeForm",
    "LAW_IDS",
    "LawReport",
    "PrecisionError",
    "QuadraticForm",
    "Rational",
    "TauPoint",
    "ThetaSpec",
    "XSeries",
    "bernoulli",
    "catalog_form",
    "check_congruence_modularity",
    "check_cusp_expansion",
    "check_e2_quasimodularity",
    "check_gauss_closed_form",
    "check_gauss_orthogonality",
    "check_generating_modularity",
    "check_inversion_law",
    "check_poisson_inversion",
    "check_rescale",
    "check_translation",
    "completed_theta",
    "cusp_combination",
    "divisor_sigma",
    "e2_exponential",
    "eisenstein_e2",
    "eisenstein_e2_numeric",
    "eisenstein_e2k",
    "enumerate_congruence",
    "enumerate_upto",
    "first_root",
    "gauss_sum",
    "kronecker_symbol",
    "load_form",
    "minimal_vector",
    "pairing_coeff",
    "run_campaign",
    "sample_gamma0",
    "theta_dual_numeric",
    "theta_expand",
    "theta_generating",
    "theta_numeric",
    "theta_offset_numeric",
    "unit_insertion_vector",
    "verify_root_identity",
]
