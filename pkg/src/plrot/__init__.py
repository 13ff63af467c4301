"""Exact computation with groups of piecewise-linear interval
homeomorphisms: group algebra, supports and orbitals, induced circle maps,
rotation numbers (exact, symbolic, or certified intervals), and searches for
witness points certifying non-embeddability into Thompson's group F.
"""

from .field import (
    TAU,
    ContextMismatchError,
    FactorizationError,
    FieldContext,
    FieldElement,
    FieldError,
    LiteralError,
    RingSpec,
    golden_power,
    infer_context,
    multiplicative_dependence,
    parse_element,
    pretty,
    ring_member,
)
from .plmap import (
    AmbientMismatchError,
    IntervalSet,
    PLMap,
    PLMapError,
    commutator,
    conjugate,
    group_support,
)
from .words import (
    EMPTY_WORD,
    GeneratorSystem,
    SearchResult,
    ThompsonPairReport,
    Word,
    WordError,
    check_thompson_pair,
    parse_word,
    search_bump,
    search_move_off,
    search_support_avoider,
    word_commutator,
    word_concat,
    word_conjugate,
    word_inverse,
    word_power,
    word_str,
)
from .circle import (
    CircleLift,
    CircleMap,
    CirclePreconditionError,
    IntervalRotation,
    RationalRotation,
    RotationResult,
    SymbolicRotation,
    build_circle_map,
    conjugated_pair,
    rotation_number,
)
from .obstruction import (
    Budget,
    ObstructionSearch,
    ObstructionWitness,
    PointOutcome,
    candidate_witness_points,
    check_obstruction_at,
    search_obstruction,
)
from .catalog import (
    CatalogEntry,
    CatalogError,
    ENTRY_NAMES,
    ExpectedWitness,
    cleary_Ftau,
    doubling_depth,
    get_entry,
    shifted_by,
    standard_F,
    stein_Fpq,
    translated_F,
    translated_ring_violations,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
