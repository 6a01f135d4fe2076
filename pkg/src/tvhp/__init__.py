"""Exact and numerical verification of two-variable Hermite polynomial identities."""

__version__ = "0.1.0"

from .errors import (
    CutoffViolation,
    DomainError,
    NegativePowerSurvives,
    NonCommutingArguments,
    TailTooLarge,
    TVHPError,
)
from .gaussian_rational import GaussianRational
from .hermite import (
    BivariatePoly,
    GenParams,
    SqueezeParam,
    hermite_coeffs,
    hermite_eval,
    hermite_eval_conj,
    laguerre_eval,
    legendre_eval,
    monomial_in_hermite_basis,
)
from .boson import OperatorPoly, OperatorWord, antinormal_order, normal_order, parse_word
from .fock import TwoModeOperator, TwoModeState, build_entangled_state, fock_state, operator_matrix
from .quadrature import GaussianIntegralSpec, hermite_rule

__all__ = [
    "__version__",
    "TVHPError", "DomainError", "NonCommutingArguments", "NegativePowerSurvives", "TailTooLarge",
    "CutoffViolation", "GaussianRational", "BivariatePoly", "GenParams", "SqueezeParam",
    "hermite_coeffs", "hermite_eval", "hermite_eval_conj", "laguerre_eval", "legendre_eval",
    "monomial_in_hermite_basis", "OperatorPoly", "OperatorWord", "normal_order", "antinormal_order",
    "parse_word", "TwoModeState", "TwoModeOperator", "build_entangled_state", "fock_state",
    "operator_matrix", "GaussianIntegralSpec", "hermite_rule",
]
