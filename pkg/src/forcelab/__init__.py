"""Finite forcing combinatorics.

Posets with a weakest element, their Boolean completions, complete
suborders and quotient forcing, amalgamation over a common subalgebra,
sweetness models with their extension relation, two-step iterations with
finite Hechler steps, towers ordered by level-wise extension, and
exhaustive verification sweeps over all of it.
"""

from .errors import (
    ConstructionError,
    ForcelabError,
    InputError,
    ParseError,
    PreconditionError,
)
from .posets import Poset
from .completion import (
    CompleteAlgebra,
    Subalgebra,
    generated_subalgebra,
    intersect_subalgebras,
    regular_open_completion,
    regular_open_sets,
)
from .embed import (
    BooleanEmbedding,
    CompleteEmbedding,
    PosetInclusion,
    QuotientName,
    atom_projection,
    complete_embedding_from_inclusion,
    complete_suborder_failure,
    induced_algebra_embedding,
    is_complete_suborder,
    is_complete_suborder_via_reductions,
    poset_inclusion,
    preserves_incompatibility,
    quotient_at_atom,
    quotient_forces,
    quotient_name,
    reductions,
    saturated_subalgebra,
    validate_complete_embedding,
)
from .amalgam import (
    AmalgamInstance,
    BackAndForthStage,
    PartialIso,
    amalgamate,
    back_and_forth_tower,
    base_embedding_from_inclusion,
    check_identification,
    extension_embedding,
    identity_amalgam,
    identity_embedding,
    iso_extension_step,
    member_by_definition,
)
from .sweet import (
    AmalgamSweetResult,
    CheckReport,
    Failure,
    SweetModel,
    amalgam_sweet,
    centered_cover,
    chain_limit,
    validate_extends,
    validate_sweet,
)
from .iterate import (
    EquivalenceReport,
    HechlerParams,
    HechlerSweetResult,
    SubalgebraIso,
    Tower,
    TowerAmalgamResult,
    TwoStep,
    compose_hechler,
    hechler_poset,
    hechler_sweet,
    tower_amalgamate,
    tower_chain_merge,
    tower_hechler,
    tower_leq,
    two_step,
    two_step_equivalence,
)
from .lemmalab import (
    VERIFIERS,
    VerificationReport,
    replay,
    verify_amalgam_claims,
    verify_bcd,
    verify_embedding_criteria,
    verify_sweet_laws,
)
from . import dsl

__all__ = [
    "AmalgamInstance",
    "AmalgamSweetResult",
    "BackAndForthStage",
    "BooleanEmbedding",
    "CheckReport",
    "CompleteAlgebra",
    "CompleteEmbedding",
    "ConstructionError",
    "EquivalenceReport",
    "Failure",
    "ForcelabError",
    "HechlerParams",
    "HechlerSweetResult",
    "InputError",
    "ParseError",
    "PartialIso",
    "Poset",
    "PosetInclusion",
    "PreconditionError",
    "QuotientName",
    "Subalgebra",
    "SubalgebraIso",
    "SweetModel",
    "Tower",
    "TowerAmalgamResult",
    "TwoStep",
    "VERIFIERS",
    "VerificationReport",
    "amalgam_sweet",
    "amalgamate",
    "atom_projection",
    "back_and_forth_tower",
    "base_embedding_from_inclusion",
    "centered_cover",
    "chain_limit",
    "check_identification",
    "complete_embedding_from_inclusion",
    "complete_suborder_failure",
    "compose_hechler",
    "dsl",
    "extension_embedding",
    "generated_subalgebra",
    "hechler_poset",
    "hechler_sweet",
    "identity_amalgam",
    "identity_embedding",
    "induced_algebra_embedding",
    "intersect_subalgebras",
    "is_complete_suborder",
    "is_complete_suborder_via_reductions",
    "iso_extension_step",
    "member_by_definition",
    "poset_inclusion",
    "preserves_incompatibility",
    "quotient_at_atom",
    "quotient_forces",
    "quotient_name",
    "reductions",
    "regular_open_completion",
    "regular_open_sets",
    "replay",
    "saturated_subalgebra",
    "tower_amalgamate",
    "tower_chain_merge",
    "tower_hechler",
    "tower_leq",
    "two_step",
    "two_step_equivalence",
    "validate_complete_embedding",
    "validate_extends",
    "validate_sweet",
    "verify_amalgam_claims",
    "verify_bcd",
    "verify_embedding_criteria",
    "verify_sweet_laws",
]
