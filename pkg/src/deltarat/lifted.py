"""Grid engine on the lifted game: types ``0..k_max`` per player, each with a
belief polytope built from the previous column's survivors."""

from __future__ import annotations

from typing import Sequence

from .complete import EliminationTrace
from .core import (
    ActionSet,
    Anchor,
    CapacityError,
    CognitiveHierarchy,
    Downward,
    Game,
    InvalidInput,
    LevelK,
    RestrictionModel,
    SolutionGrid,
    TypeIndex,
    opponent,
    truncate_levels,
)
from .lp import BeliefPolytope, Block, justifiable_in_polytope

# survivors[i][k] is the action set of player i's type k at the current column
StepSurvivors = Sequence[Sequence[ActionSet]]

DEFAULT_MAX_WORK = 20_000


def allowed_types(model: RestrictionModel, k: int) -> tuple[int, ...]:
    if isinstance(model, LevelK):
        return (k - 1,)
    if isinstance(model, (Downward, CognitiveHierarchy)):
        return tuple(range(k))
    raise InvalidInput(f"unknown restriction model {model!r}")


def build_restriction_polytope(
    game: Game, model: RestrictionModel, anchor: Anchor, owner: TypeIndex, survivors: StepSurvivors
) -> BeliefPolytope:
    """Admissible lifted conjectures of ``owner`` given current survivors."""
    if owner.k < 1:
        raise InvalidInput("0-types hold no beliefs; their row is the full action set")
    opp = opponent(owner.player)
    masses = None
    if isinstance(model, CognitiveHierarchy):
        masses = truncate_levels(model.levels, owner.k)
    blocks = []
    for t in allowed_types(model, owner.k):
        acts = tuple(sorted(survivors[opp][t]))
        if not acts:
            raise InvalidInput(f"opponent type {t} has no surviving actions")
        blocks.append(
            Block(
                t,
                acts,
                None if masses is None else masses[t],
                anchor.dists[opp] if t == 0 else None,
            )
        )
    poly = BeliefPolytope(owner.player, owner, game.n_actions(opp), tuple(blocks))
    return poly


def delta_grid(
    game: Game,
    model: RestrictionModel,
    anchor: Anchor,
    k_max: int,
    n_max: int | None = None,
    *,
    intersect: bool = True,
    max_work: int = DEFAULT_MAX_WORK,
) -> SolutionGrid:
    """Run the step rule for columns ``1..n_max`` on rows ``0..k_max``.

    With ``intersect`` (the definition) a pair is only re-examined if it
    survived the previous column. ``intersect=False`` tests every action at
    every column, which must give the same grid; it exists to check that
    column monotonicity is a consequence rather than an assumption.
    """
    if n_max is None:
        n_max = k_max
    if k_max < 1 or n_max < 1:
        raise InvalidInput("k_max and n_max must be at least 1")
    anchor.validate_for(game)
    if isinstance(model, CognitiveHierarchy):
        h = model.levels.horizon
        if h is not None and h < k_max:
            raise InvalidInput(f"level distribution only covers {h} levels, need {k_max}")
    work = k_max * n_max * (game.n_actions(0) + game.n_actions(1))
    if work > max_work:
        raise CapacityError(f"grid needs about {work} feasibility queries, limit is {max_work}")

    full = (game.all_actions(0), game.all_actions(1))
    columns = [tuple(tuple(full[i] for _ in range(k_max + 1)) for i in (0, 1))]
    witnesses = {}
    for n in range(n_max):
        prev = columns[-1]
        col = []
        for i in (0, 1):
            row = [full[i]]
            for k in range(1, k_max + 1):
                poly = build_restriction_polytope(game, model, anchor, TypeIndex(i, k), prev)
                candidates = prev[i][k] if intersect else full[i]
                members = set()
                for a in sorted(candidates):
                    w = justifiable_in_polytope(game, i, a, poly)
                    if w is not None:
                        members.add(a)
                        witnesses[(i, k, n + 1, a)] = w
                row.append(frozenset(members))
            col.append(tuple(row))
        columns.append(tuple(col))
    cells = tuple(
        tuple(tuple(columns[n][i][k] for n in range(n_max + 1)) for k in range(k_max + 1)) for i in (0, 1)
    )
    return SolutionGrid(game, model, anchor, k_max, n_max, cells, witnesses)


def limit_sets(grid: SolutionGrid) -> tuple[dict[int, ActionSet], dict[int, ActionSet]]:
    """Per player, ``k -> cell(k, k)`` after checking each row is constant from ``n = k`` on."""
    if grid.n_max < grid.k_max:
        raise InvalidInput("limits need n_max >= k_max")
    out = ({}, {})
    for i in (0, 1):
        for k in range(1, grid.k_max + 1):
            row = grid.row(i, k)
            if any(row[n] != row[k] for n in range(k, grid.n_max + 1)):
                raise AssertionError(f"row {k} of player {i + 1} does not stabilise at n = {k}")
            out[i][k] = row[k]
    return out


def consistent_types(grid: SolutionGrid, trace: EliminationTrace, n: int) -> tuple[frozenset, frozenset]:
    """Per player, the levels ``k`` whose column-``n`` cell lies inside ``R^n``."""
    if not 0 <= n <= grid.n_max:
        raise InvalidInput(f"n must lie in 0..{grid.n_max}")
    return tuple(
        frozenset(k for k in range(1, grid.k_max + 1) if grid.cell(i, k, n) <= trace.at(i, n)) for i in (0, 1)
    )
