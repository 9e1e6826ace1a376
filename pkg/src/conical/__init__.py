"""Conically averaged operators: certificate calculus, splitting algorithms,
and brute-force verification oracles for generalized monotone problems."""

from .calculus import (
    ConicalCert,
    ScaledConicalCert,
    compose2,
    compose_many,
    compose_scaled,
    convex_combination,
    firmly_nonexpansive_shift,
    relax,
)
from .errors import (
    CompositionError,
    DimensionMismatchError,
    InfeasibleParametersError,
    NotEvaluableError,
    ParameterError,
)
from .hilbert import identity2_residual, identity_residual, inner
from .operators import (
    Affine,
    BoxIndicator,
    GradQuadratic,
    L1,
    MonotonicityCert,
    Quadratic,
    ScaledIdentity,
    Subdifferential,
    WeaklyConvexL1,
    certify_comonotone,
    certify_monotone,
    evaluate,
    function_value,
)
from .resolvents import (
    cert_forward_step,
    cert_resolvent_comonotone,
    cert_resolvent_monotone,
    comonotone_graph_inequality,
    prox,
    reflected_resolvent,
    relaxed_resolvent,
    resolvent,
)
from .algorithms import (
    AlgorithmInstance,
    ConstantStep,
    HarmonicTailStep,
    IterationTrace,
    build_adr,
    build_rfb,
    build_rpp,
    convex_min_instance,
    km_run,
    shadow,
    validate_params_comonotone,
    validate_params_monotone,
)
from .oracle import (
    SampleReport,
    analytic_zero,
    brute_prox,
    find_admissible_order,
    rate_check,
    sample_conical_check,
    sample_monotonicity_check,
)

__version__ = "0.1.0"
