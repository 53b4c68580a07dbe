"""Combinatorial model of singular sets of stable maps from the 3-sphere to 3-space.

Singular sets are rewritten by eleven kinds of transitions; the package tracks
the global invariants ``(I_E, I_C, I_G, I_S)``, checks the laws tying them to
the transitions crossed, and plans or explores transition sequences.
"""

from .calculus import (
    BASE_TUPLE,
    PathReport,
    check_theorem,
    fold_parity,
    lemma2_parity,
    path_report,
    swallowtail_free_parity,
    theorem_rhs,
    verify_plan,
)
from .errors import DomainError, ParseError, PreconditionError, SiteReferenceError, StableMapError, ValidationError
from .explorer import WalkTrace, enumerate_reachable, random_walk, reachable_states
from .planner import Plan, bfs_plan, plan_fold_free_cusps, plan_prescribed
from .realizability import NestingForest, construct_concentric, construct_nested_pairs, fold_feasible
from .state import (
    CuspCircuit,
    IncrementVector,
    InvariantTuple,
    MapState,
    SurfaceComponent,
    SurfaceDirection,
    canonical_key,
    canonical_projection,
    format_state,
    invariants,
    parse_state,
    validate,
)
from .transitions import (
    Direction,
    Site,
    Step,
    TransitionCounts,
    TransitionKind,
    aggregate,
    applicable_sites,
    apply,
    counts_of,
    format_plan,
    increment_of,
    parse_plan,
    replay,
)

__all__ = [name for name in dir() if not name.startswith("_")]
