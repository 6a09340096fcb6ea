"""Exact decision procedure for zeros of algebraic linear recurrences with
few characteristic roots."""

__version__ = "0.1.0"

from .algebraic import AlgebraicNumber, FieldElement, NumberField, construct_field, height, is_root_of_unity
from .bounds import BoundConfig, BoundParams, TailBound, matveev_lower, tail_threshold, yu_upper
from .classifier import NOT_IN_MSTV, Witness, find_witness
from .errors import (BudgetExceeded, ConfigurationError, DomainError, InternalError, ParseError,
                     PrecisionExhausted, SkolemError)
from .lrs import LRS, char_roots, decompose, degeneracy, eval_exact, exp_poly, minimize_order
from .padic import places_above, valuation
from .problem import parse, parse_text, serialize
from .search import SievePrime, ZeroReport, prune, sieve_prime, solve

__all__ = [
    "AlgebraicNumber", "BoundConfig", "BoundParams", "BudgetExceeded", "ConfigurationError",
    "DomainError", "FieldElement", "InternalError", "LRS", "NOT_IN_MSTV", "NumberField",
    "ParseError", "PrecisionExhausted", "SievePrime", "SkolemError", "TailBound", "Witness",
    "ZeroReport", "char_roots", "construct_field", "decompose", "degeneracy", "eval_exact",
    "exp_poly", "find_witness", "height", "is_root_of_unity", "matveev_lower", "minimize_order",
    "parse", "parse_text", "places_above", "prune", "serialize", "sieve_prime", "solve",
    "tail_threshold", "valuation", "yu_upper",
]
