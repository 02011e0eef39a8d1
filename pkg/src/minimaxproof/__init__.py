"""Numerical proofs of one-variable inequalities f(x) >= 0 via minimax approximation."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CertificateError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    IndeterminateError,
    LimitError,
    MinimaxProofError,
    ParseError,
    QuadratureError,
)
from .polycore import (  # noqa: E402
    Interval,
    Polynomial,
    PositivityEvidence,
    assert_positive_on,
    count_real_roots,
    differentiate,
    eval_poly,
)
from .minimax import (  # noqa: E402
    FunctionHandle,
    MinimaxResult,
    RemezOptions,
    equioscillation_report,
    infnorm,
    remez_minimax,
)
from .specfun import (  # noqa: E402
    KurepaConstants,
    QuadratureSettings,
    gamma_fn,
    kurepa_K,
    kurepa_K_check,
    kurepa_constants,
    kurepa_deriv0,
)
from .exprlang import EvalEnv, eval_expr, parse_expr, to_text  # noqa: E402
from .normalize import (  # noqa: E402
    EndpointProfile,
    NormalizedFunction,
    build_normalized,
    endpoint_limit,
    transform_infinite,
)
from .prover import ProofCertificate, ProofJob, prove_nonneg, verify_certificate  # noqa: E402
