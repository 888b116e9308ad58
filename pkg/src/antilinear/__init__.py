"""Anti-linear operators, the canonical Hermitian form and orthogonal conjugations."""

from .construct import (BoundError, OrthoSet, bound, combine_sets, fourier_set, max_sets,
                        tau_set, tensor)
from .core import (AntiLinearOp, DimensionError, LinearOp, NumericalRangeEstimate, adjoint,
                   apply, canonical_form, compose_aa, compose_al, compose_la, conjugation_k,
                   hermitian_part, inner, is_antiunitary, is_conjugation, is_hermitian, is_skew,
                   is_skew_conjugation, make_op, numerical_range_samples, rank_one_c, scale,
                   skew_part)
from .search import (Budget, Certificate, SearchConfig, SearchReport, explore_dimension,
                     orthogonality_loss, random_structured_unitary, search_max_set, verify_set)
from .structure import GramMatrix, OperatorBasis, basis_minus, basis_plus, gram, signature, space_dims
from .takagi import takagi

__version__ = "0.1.0"
