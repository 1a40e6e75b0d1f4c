"""Exact arithmetic for Carmichael quotients C_m(a) = (a^lambda(m) - 1) / m."""

from .arith import (
    Factorization,
    bernoulli_number,
    bernoulli_polynomial,
    factorize,
    is_prime,
    mod_inverse,
    mod_pow,
    multiplicative_order,
    p_adic_valuation,
)
from .errors import (
    CarmqError,
    HypothesisError,
    InvalidInputError,
    InvariantViolation,
    NotCoprimeError,
)
from .quotients import (
    ModulusContext,
    carmichael_lambda,
    carmichael_quotient_exact,
    carmichael_quotient_mod,
    euler_quotient_mod,
    fermat_quotient_mod,
    modulus_context,
)

__version__ = "0.1.0"
