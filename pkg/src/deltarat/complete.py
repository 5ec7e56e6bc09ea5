"""Complete-information solution concepts: iterated strict dominance, classic
level-k, and cognitive hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core import (
    ActionSet,
    Anchor,
    Conjecture,
    Game,
    InvalidInput,
    LevelDistribution,
    best_reply,
    opponent,
    truncate_levels,
)
from .lp import MixedStrategy, justifying_conjecture, strictly_dominated
from .simplex import OPTIMAL, LinearSystem, solve


@dataclass(frozen=True)
class EliminationTrace:
    """``sets[i][n]`` is ``R_i^n``; the last entry is the fixpoint.

    ``fixpoint`` is the first ``n`` with ``R^n = R^{n+1}``.
    """

    game: Game
    sets: tuple[tuple[ActionSet, ...], tuple[ActionSet, ...]]
    fixpoint: int
    dominators: dict = field(default_factory=dict, compare=False, repr=False)

    def at(self, player: int, n: int) -> ActionSet:
        """``R_i^n``; rounds past the fixpoint return the fixpoint."""
        if n < 0:
            raise InvalidInput("rounds are non-negative")
        seq = self.sets[player]
        return seq[min(n, len(seq) - 1)]

    def limit(self, player: int) -> ActionSet:
        return self.sets[player][-1]


Scheduler = Callable[[int, int, ActionSet], ActionSet]


def rationalizability(game: Game, schedule: Scheduler | None = None) -> EliminationTrace:
    """Iterated elimination of strictly dominated actions (mixed dominators).

    ``schedule(round, player, dominated)`` may return a nonempty subset of the
    dominated actions to remove this round; by default all are removed. Any
    schedule reaches the same fixpoint, though the round count may differ.
    """
    current = [game.all_actions(0), game.all_actions(1)]
    history = [[current[0]], [current[1]]]
    dominators: dict[tuple[int, int], MixedStrategy] = {}
    rnd = 0
    while True:
        nxt = []
        for i in (0, 1):
            dominated = {}
            for a in sorted(current[i]):
                hit, w = strictly_dominated(game, i, a, current[i], current[opponent(i)])
                if hit:
                    dominated[a] = w
            remove = frozenset(dominated)
            if schedule is not None and remove:
                chosen = frozenset(schedule(rnd, i, remove))
                if not chosen or not chosen <= remove:
                    raise InvalidInput("schedule must pick a nonempty subset of the dominated actions")
                remove = chosen
            for a in remove:
                dominators[(i, a)] = dominated[a]
            nxt.append(current[i] - remove)
        if nxt == current:
            break
        current = nxt
        rnd += 1
        for i in (0, 1):
            history[i].append(current[i])
    return EliminationTrace(game, (tuple(history[0]), tuple(history[1])), rnd, dominators)


@dataclass(frozen=True)
class LevelTrace:
    """``sets[i][k-1]`` is ``L_i^k``; ``witnesses[(i, k, a)]`` is a justifying conjecture."""

    anchor: Anchor
    sets: tuple[tuple[ActionSet, ...], tuple[ActionSet, ...]]
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)

    def level(self, player: int, k: int) -> ActionSet:
        if not 1 <= k <= len(self.sets[player]):
            raise InvalidInput(f"level {k} outside 1..{len(self.sets[player])}")
        return self.sets[player][k - 1]

    @property
    def k_max(self) -> int:
        return len(self.sets[0])


def level_k(game: Game, anchor: Anchor, k_max: int) -> LevelTrace:
    """Set-valued classic level-k: no tie-breaking, all best replies kept."""
    if k_max < 1:
        raise InvalidInput("k_max must be at least 1")
    anchor.validate_for(game)
    witnesses = {}
    levels = []
    for i in (0, 1):
        conj = anchor.conjecture_of(i)
        br = best_reply(game, i, conj)
        for a in br:
            witnesses[(i, 1, a)] = conj
        levels.append(br)
    seq = [[levels[0]], [levels[1]]]
    for k in range(2, k_max + 1):
        prev = (seq[0][-1], seq[1][-1])
        for i in (0, 1):
            target = prev[opponent(i)]
            members = set()
            for a in range(game.n_actions(i)):
                conj = justifying_conjecture(game, i, a, target)
                if conj is not None:
                    members.add(a)
                    witnesses[(i, k, a)] = conj
            seq[i].append(frozenset(members))
    return LevelTrace(anchor, (tuple(seq[0]), tuple(seq[1])), witnesses)


@dataclass(frozen=True)
class CHTrace:
    """``sets[i][k-1]`` is ``CH_i^k``."""

    anchor: Anchor
    levels: LevelDistribution
    sets: tuple[tuple[ActionSet, ...], tuple[ActionSet, ...]]
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)

    def level(self, player: int, k: int) -> ActionSet:
        if not 1 <= k <= len(self.sets[player]):
            raise InvalidInput(f"level {k} outside 1..{len(self.sets[player])}")
        return self.sets[player][k - 1]


def _ch_step(game: Game, player: int, action: int, anchor: Anchor, weights, lower) -> Conjecture | None:
    """Conjecture with level weights ``weights`` (over 0..m-1), the anchor on
    level 0 and level ``t`` behaviour inside ``lower[t-1]``, making ``action``
    a best reply."""
    opp = opponent(player)
    n_opp = game.n_actions(opp)
    p = anchor.dists[opp]
    system = LinearSystem()
    for t in range(1, len(weights)):
        for b in sorted(lower[t - 1]):
            system.add_variable((t, b))
        system.add({(t, b): 1 for b in lower[t - 1]}, "==", weights[t])
    pay = game.payoffs[player]
    base = [sum((weights[0] * p[b] * (pay[action][b] - pay[alt][b]) for b in range(n_opp)), Fraction(0))
            for alt in range(game.n_actions(player))]
    for alt in range(game.n_actions(player)):
        if alt == action:
            continue
        coeffs = {v: pay[action][v[1]] - pay[alt][v[1]] for v in system.variables}
        system.add(coeffs, ">=", -base[alt])
    res = solve(system)
    if res.status != OPTIMAL:
        return None
    marginal = [weights[0] * p[b] for b in range(n_opp)]
    for (t, b), w in res.assignment.items():
        marginal[b] += w
    conj = Conjecture(player, tuple(marginal))
    if action not in best_reply(game, player, conj):
        raise AssertionError("CH witness failed exact re-verification")
    return conj


def cognitive_hierarchy(game: Game, anchor: Anchor, levels: LevelDistribution, k_max: int) -> CHTrace:
    """Set-valued cognitive hierarchy; level ``m`` uses the truncation ``f^m``."""
    if k_max < 1:
        raise InvalidInput("k_max must be at least 1")
    anchor.validate_for(game)
    if levels.horizon is not None and levels.horizon < k_max:
        raise InvalidInput(f"level distribution only covers {levels.horizon} levels, need {k_max}")
    witnesses = {}
    seq: list[list[ActionSet]] = [[], []]
    for i in (0, 1):
        conj = anchor.conjecture_of(i)
        br = best_reply(game, i, conj)
        for a in br:
            witnesses[(i, 1, a)] = conj
        seq[i].append(br)
    for m in range(2, k_max + 1):
        weights = truncate_levels(levels, m)
        step = []
        for i in (0, 1):
            lower = seq[opponent(i)][: m - 1]
            members = set()
            for a in range(game.n_actions(i)):
                conj = _ch_step(game, i, a, anchor, weights, lower)
                if conj is not None:
                    members.add(a)
                    witnesses[(i, m, a)] = conj
            step.append(frozenset(members))
        for i in (0, 1):
            seq[i].append(step[i])
    return CHTrace(anchor, levels, (tuple(seq[0]), tuple(seq[1])), witnesses)
