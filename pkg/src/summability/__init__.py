"""Optimal summability exponents for coefficients of multilinear maps and
homogeneous polynomials on l_p spaces, with numerical sharpness checks."""

from .errors import (
    Degenerate,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidParams,
    NotVectorValued,
    OutOfRegion,
    PreconditionViolated,
    SummabilityError,
    TooLarge,
)
from .exponents import (
    Case,
    DomainVector,
    ExponentResult,
    ExtExponent,
    bennett_carl_r,
    cotype_of_lq,
    kwapien_exponent,
    lambda_exponent,
    lp_valued_exponent,
    mu_exponent,
    multilinear_exponent,
    polynomial_exponent,
    praciano_exponent,
    zalduendo_exponent,
)
from .tensors import (
    CoefficientTensor,
    MixedSumReport,
    MultilinearSpec,
    coefficient_sum,
    evaluate,
    lq_norm,
    mixed_sum,
)
from .normest import EstimatorConfig, NormEstimate, brute_force_norm, dual_maximizer, estimate_norm, scalarize
from .constructions import (
    ConstructionOutput,
    diagonal_scalar,
    diagonal_vector,
    fourier_vector,
    random_sign_tensor,
)
from .experiments import (
    Family,
    GrowthFit,
    SweepResult,
    chevet_growth,
    fit_growth,
    mixed_sum_check,
    optimality_slope,
    verify_inequality,
)

__version__ = "0.1.0"
