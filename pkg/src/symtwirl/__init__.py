"""Weighted symmetric designs: exact construction, verification and randomness-cost bounds."""

from .design import (
    ConstraintSystem,
    WeightedDesign,
    build_constraint_system,
    caratheodory_reduce,
    is_uniform_forced,
    minimal_support_exhaustive,
    verify_design,
    verify_design_operational,
)
from .exact_operator import ExactOperator, ExactScalar
from .limits import ContractError, DimensionError, NotVerifiedError, SizeLimitError, size_limits
from .perm_core import Permutation, act_on_tuple, compose, enumerate_permutations, inverse
from .twirl import Distribution, uniform_twirl, weighted_twirl
from .typestat import TypeDistribution

__version__ = "0.1.0"
