"""
Cubic PRF Library

Decide, classify, canonicalize and count degree-3 permutation rational
functions of the projective line over finite fields.

Modules:
    gf - Finite fields F_{p^k} with integer-coded elements, extensions F_{q^d}
    polyring - Polynomials over F_q, resultants, discriminants, small root finding
    projfunc - Rational functions, Mobius maps, the function parser
    cubicperm - Permutation criteria, canonical forms with witnesses
    census - Counting, equivalence classes, complete permutations
    selfcheck - Acceptance suite
    error_handler - Exception hierarchy and CLI decorator
    config_manager - Layered configuration of size guards
    batch_processor - Partitioned census runs with checkpoint/resume

Usage:
    from cubic_prf_lib import field_create, parse_ratfunc, is_permutation

    f7 = field_create(7)
    report = is_permutation(parse_ratfunc("(x^3+x)/(2*x^2+1)", f7))
    assert report.is_permutation
"""

__version__ = "0.1.0"

from .census import (
    CensusResult,
    CensusRow,
    Orbit,
    OrbitTable,
    ShapeCounts,
    complete_census,
    count_permutations,
    enumerate_pairs,
    equivalence_classes,
    expected_class_count,
    formula_Nq,
    formula_shape_counts,
    predicted_complete,
    sample_pairs,
    sample_prfs,
)
from .config_manager import CubicPrfConfig, Guards, get_guards
from .cubicperm import (
    CanonForm,
    ClassReport,
    canonical_parameters,
    canonicalize,
    criterion_even,
    criterion_odd,
    decide_permutation,
    discriminant_verdict,
    even_family_member,
    extension_permutation,
    is_complete,
    is_lambda_complete,
    is_permutation,
    odd_family_member,
    pencil_discriminant,
    quadratic_resolvent,
    representative,
    resolvent_system_holds,
    resolvent_verdict,
    resolvent_witness,
)
from .error_handler import (
    ContextMismatchError,
    CrosscheckError,
    CubicPrfError,
    ErrorContext,
    FieldError,
    GuardExceededError,
    InternalConsistencyError,
    NotPermutationError,
    ParseError,
    ScopeError,
    ValidationError,
    handle_errors,
)
from .gf import ExtCtx, FieldCtx, FieldElem, ext_create, field_create, parse_field_spec
from .polyring import Poly, cubic_discriminant, gcd_monic, resultant
from .projfunc import (
    Mobius,
    ProjPoint,
    RatFunc,
    compose_mobius,
    conjugate,
    format_ratfunc,
    fractional_jump,
    is_permutation_bruteforce,
    parse_ratfunc,
    ratfunc_new,
)

__all__ = [
    "__version__",
    # census
    "CensusResult",
    "CensusRow",
    "Orbit",
    "OrbitTable",
    "ShapeCounts",
    "complete_census",
    "count_permutations",
    "enumerate_pairs",
    "equivalence_classes",
    "expected_class_count",
    "formula_Nq",
    "formula_shape_counts",
    "predicted_complete",
    "sample_pairs",
    "sample_prfs",
    # config
    "CubicPrfConfig",
    "Guards",
    "get_guards",
    # cubicperm
    "CanonForm",
    "ClassReport",
    "canonical_parameters",
    "canonicalize",
    "criterion_even",
    "criterion_odd",
    "decide_permutation",
    "discriminant_verdict",
    "even_family_member",
    "extension_permutation",
    "is_complete",
    "is_lambda_complete",
    "is_permutation",
    "odd_family_member",
    "pencil_discriminant",
    "quadratic_resolvent",
    "representative",
    "resolvent_verdict",
    "resolvent_system_holds",
    "resolvent_witness",
    # errors
    "ContextMismatchError",
    "CrosscheckError",
    "CubicPrfError",
    "ErrorContext",
    "FieldError",
    "GuardExceededError",
    "InternalConsistencyError",
    "NotPermutationError",
    "ParseError",
    "ScopeError",
    "ValidationError",
    "handle_errors",
    # fields
    "ExtCtx",
    "FieldCtx",
    "FieldElem",
    "ext_create",
    "field_create",
    "parse_field_spec",
    # polynomials
    "Poly",
    "cubic_discriminant",
    "gcd_monic",
    "resultant",
    # functions
    "Mobius",
    "ProjPoint",
    "RatFunc",
    "compose_mobius",
    "conjugate",
    "format_ratfunc",
    "fractional_jump",
    "is_permutation_bruteforce",
    "parse_ratfunc",
    "ratfunc_new",
]
