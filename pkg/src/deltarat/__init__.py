"""Exact bounded-reasoning solution concepts for two-player games."""

from .complete import CHTrace, EliminationTrace, LevelTrace, cognitive_hierarchy, level_k, rationalizability
from .core import (
    Anchor,
    CapacityError,
    CognitiveHierarchy,
    Conjecture,
    Downward,
    Game,
    InvalidInput,
    LevelDistribution,
    LevelK,
    SolutionGrid,
    TypeIndex,
    best_reply,
    expected_payoff,
    truncate_levels,
)
from .io import parse_game, parse_scenario, serialize_game
from .lifted import build_restriction_polytope, consistent_types, delta_grid, limit_sets
from .lp import BeliefPolytope, ebrs_enumerate, justifiable_in_polytope, max_slack, strictly_dominated
from .robustness import genericity_check, robust_ch_generic, robust_downward_check, robust_level_k

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "BeliefPolytope",
    "CHTrace",
    "CapacityError",
    "CognitiveHierarchy",
    "Conjecture",
    "Downward",
    "EliminationTrace",
    "Game",
    "InvalidInput",
    "LevelDistribution",
    "LevelK",
    "LevelTrace",
    "SolutionGrid",
    "TypeIndex",
    "best_reply",
    "build_restriction_polytope",
    "cognitive_hierarchy",
    "consistent_types",
    "delta_grid",
    "ebrs_enumerate",
    "expected_payoff",
    "genericity_check",
    "justifiable_in_polytope",
    "level_k",
    "limit_sets",
    "max_slack",
    "parse_game",
    "parse_scenario",
    "rationalizability",
    "robust_ch_generic",
    "robust_downward_check",
    "robust_level_k",
    "serialize_game",
    "strictly_dominated",
    "truncate_levels",
]
