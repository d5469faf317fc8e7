"""Sobolev embeddings on strip-like domains: constants, extremals and noncompactness witnesses."""

__version__ = "0.1.0"

from .domain import EmbeddingConstants, StripDomain, embedding_norm, lambda_closed_form
from .eigensolve import EigenResult, GridFunction, discrete_rayleigh, first_eigenpair
from .errors import (
    CertificationError,
    ConvergenceError,
    DimensionError,
    DomainError,
    PreconditionError,
    RefutationError,
    StripEmbedError,
)
from .extremal import (
    ExtremalFunction,
    SeparableFunction,
    rayleigh,
    rectangle_maximizer,
    strip_trial,
    verify_ul_norms,
)
from .noncompact import (
    NetCandidate,
    NetCenter,
    build_translates,
    certify_isomorphism_bound,
    refute_net,
)
from .ptrig import PExponent, cos_p, pi_p_closed_form, pi_p_quadrature, sin_cos_p, sin_p
from .quad import QuadratureRule, Rectangle

__all__ = [
    "CertificationError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "EigenResult",
    "EmbeddingConstants",
    "ExtremalFunction",
    "GridFunction",
    "NetCandidate",
    "NetCenter",
    "PExponent",
    "PreconditionError",
    "QuadratureRule",
    "Rectangle",
    "RefutationError",
    "SeparableFunction",
    "StripDomain",
    "StripEmbedError",
    "build_translates",
    "certify_isomorphism_bound",
    "cos_p",
    "discrete_rayleigh",
    "embedding_norm",
    "first_eigenpair",
    "lambda_closed_form",
    "pi_p_closed_form",
    "pi_p_quadrature",
    "rayleigh",
    "rectangle_maximizer",
    "refute_net",
    "sin_cos_p",
    "sin_p",
    "strip_trial",
    "verify_ul_norms",
]
