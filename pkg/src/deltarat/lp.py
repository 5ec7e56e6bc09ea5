"""Exact feasibility primitives on top of :mod:`deltarat.simplex`.

Strict inequalities are never approximated: a strict system is decided by
maximising a free slack variable and testing whether the optimum is positive.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .core import (
    ActionSet,
    CapacityError,
    Conjecture,
    Game,
    InvalidInput,
    TypeIndex,
    best_reply,
    marginal_payoffs,
    opponent,
)
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearSystem, solve

SLACK = "__slack__"
DEFAULT_MAX_ACTIONS = 12
DEFAULT_WARN_SUBSETS = 256


@dataclass(frozen=True)
class MixedStrategy:
    player: int
    weights: tuple[Fraction, ...]


PlainConjecture = Conjecture


@dataclass(frozen=True)
class LiftedConjecture:
    """Distribution over opponent ``(type, action)`` pairs.

    ``weights`` is a sorted tuple of ``((type, action), weight)`` entries with
    positive weight. ``type`` is ``None`` for an untyped block.
    """

    player: int
    owner: TypeIndex | None
    weights: tuple

    def marginal(self, n_opp: int) -> tuple[Fraction, ...]:
        vec = [Fraction(0)] * n_opp
        for (_, a), w in self.weights:
            vec[a] += w
        return tuple(vec)

    def as_dict(self) -> dict:
        return dict(self.weights)


@dataclass(frozen=True)
class SlackResult:
    status: str
    slack: Fraction | None
    assignment: dict | None


def max_slack(system: LinearSystem, slack=SLACK) -> SlackResult:
    """Maximise the free variable ``slack`` subject to ``system``.

    Infeasibility is a normal outcome (``status == "infeasible"``), as is an
    unbounded slack.
    """
    system = LinearSystem(list(system.variables), list(system.constraints), None, set(system.free))
    if slack not in system.variables:
        system.add_variable(slack, free=True)
    system.free.add(slack)
    system.objective = {slack: Fraction(1)}
    res = solve(system)
    if res.status == INFEASIBLE:
        return SlackResult(INFEASIBLE, None, None)
    if res.status == UNBOUNDED:
        return SlackResult(UNBOUNDED, None, None)
    return SlackResult(OPTIMAL, res.value, res.assignment)


# --- belief polytopes -------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One opponent type inside a belief polytope.

    ``mass`` fixes the total probability of the block (``None`` = free).
    ``anchor``, when set, pins the block's conditional action distribution;
    it is given over all opponent actions.
    """

    type: int | None
    actions: tuple[int, ...]
    mass: Fraction | None = None
    anchor: tuple[Fraction, ...] | None = None


@dataclass(frozen=True)
class BeliefPolytope:
    """Linear description of the admissible lifted conjectures of one type.

    Variables are ``(type, action)`` pairs, one per block action. Constraints:
    non-negativity, total mass one, fixed block masses, and for anchored blocks
    ``mu(t, a) = p(a) * sum_b mu(t, b)``.
    """

    player: int
    owner: TypeIndex | None
    n_opp: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        self.validate()
        object.__setattr__(self, "_hash", hash((self.player, self.owner, self.n_opp, self.blocks)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def simplex(cls, game: Game, player: int, opp_set: Iterable[int]) -> "BeliefPolytope":
        """All conjectures supported within ``opp_set``."""
        acts = tuple(sorted(opp_set))
        if not acts:
            raise InvalidInput("empty opponent set")
        return cls(player, None, game.n_actions(opponent(player)), (Block(None, acts),))

    def variables(self) -> list[tuple]:
        return [(b.type, a) for b in self.blocks for a in b.actions]

    def constraints(self) -> list[tuple[dict, str, Fraction]]:
        cons = [({v: Fraction(1) for v in self.variables()}, "==", Fraction(1))]
        for b in self.blocks:
            if b.mass is not None:
                cons.append(({(b.type, a): Fraction(1) for a in b.actions}, "==", b.mass))
            if b.anchor is not None:
                for a in b.actions:
                    coeffs = {(b.type, x): -b.anchor[a] for x in b.actions}
                    coeffs[(b.type, a)] = coeffs[(b.type, a)] + 1
                    cons.append((coeffs, "==", Fraction(0)))
        return cons

    def to_system(self) -> LinearSystem:
        system = LinearSystem()
        for v in self.variables():
            system.add_variable(v)
        for coeffs, sense, rhs in self.constraints():
            system.add(coeffs, sense, rhs)
        return system

    def validate(self) -> None:
        seen = set()
        for b in self.blocks:
            if b.type in seen:
                raise InvalidInput(f"type {b.type} appears twice in the polytope")
            seen.add(b.type)
            if not b.actions or any(not 0 <= a < self.n_opp for a in b.actions):
                raise InvalidInput("polytope block has an empty or out-of-range action list")
            if b.anchor is not None and len(b.anchor) != self.n_opp:
                raise InvalidInput("anchored block needs a full-length anchor")
        fixed = [b.mass for b in self.blocks if b.mass is not None]
        if len(fixed) == len(self.blocks) and sum(fixed) != 1:
            raise InvalidInput("fixed block masses do not sum to one")

    def contains(self, point: Mapping) -> bool:
        """Exact membership test for a ``{(type, action): weight}`` point."""
        allowed = set(self.variables())
        if any(v not in allowed and w != 0 for v, w in point.items()):
            return False
        for v in allowed:
            if point.get(v, 0) < 0:
                return False
        for coeffs, _, rhs in self.constraints():
            if sum((c * point.get(v, 0) for v, c in coeffs.items()), Fraction(0)) != rhs:
                return False
        return True

    def marginal(self, point: Mapping) -> tuple[Fraction, ...]:
        vec = [Fraction(0)] * self.n_opp
        for (_, a), w in point.items():
            vec[a] += w
        return tuple(vec)

    def candidate_points(self):
        """A few easy vertices of the polytope, for cheap witness search."""
        free = any(b.mass is None for b in self.blocks)
        if free:
            if any(b.mass is not None for b in self.blocks):
                return
            for b in self.blocks:
                if b.anchor is not None:
                    yield {(b.type, a): b.anchor[a] for a in b.actions if b.anchor[a]}
                else:
                    for a in b.actions:
                        yield {(b.type, a): Fraction(1)}
            return
        # fixed masses: every free block on the same opponent action where it can
        for target in range(self.n_opp):
            point = {}
            for b in self.blocks:
                if b.anchor is not None:
                    for a in b.actions:
                        if b.anchor[a]:
                            point[(b.type, a)] = b.mass * b.anchor[a]
                else:
                    a = target if target in b.actions else b.actions[0]
                    point[(b.type, a)] = b.mass
            yield point


def _is_best_reply(game: Game, player: int, action: int, marginal: Sequence[Fraction]) -> bool:
    values = marginal_payoffs(game, player, marginal)
    return values[action] == max(values)


def _as_witness(polytope: BeliefPolytope, point: Mapping) -> LiftedConjecture:
    weights = tuple(sorted(((v, w) for v, w in point.items() if w != 0), key=lambda x: (x[0][0] is not None, x[0])))
    return LiftedConjecture(polytope.player, polytope.owner, weights)


def justifiable_in_polytope(
    game: Game, player: int, action: int, polytope: BeliefPolytope
) -> LiftedConjecture | None:
    """A conjecture in ``polytope`` whose action-marginal makes ``action`` a
    best reply, or ``None`` when no such conjecture exists."""
    if polytope.player != player:
        raise InvalidInput("polytope belongs to the other player")
    if polytope.n_opp != game.n_actions(opponent(player)):
        raise InvalidInput("polytope does not match the game")
    return _justify(game, player, action, polytope)


@lru_cache(maxsize=1 << 16)
def _justify(game: Game, player: int, action: int, polytope: BeliefPolytope) -> LiftedConjecture | None:
    for point in polytope.candidate_points():
        if _is_best_reply(game, player, action, polytope.marginal(point)):
            return _as_witness(polytope, point)
    system = polytope.to_system()
    own_row = game.payoffs[player][action]
    for alt, alt_row in enumerate(game.payoffs[player]):
        if alt == action:
            continue
        coeffs = {(t, b): own_row[b] - alt_row[b] for t, b in system.variables}
        system.add(coeffs, ">=", 0)
    res = solve(system)
    if res.status != OPTIMAL:
        return None
    point = res.assignment
    if not (polytope.contains(point) and _is_best_reply(game, player, action, polytope.marginal(point))):
        raise AssertionError("LP witness failed exact re-verification")
    return _as_witness(polytope, point)


def justifiable_set(game: Game, player: int, opp_set: Iterable[int]) -> ActionSet:
    """Actions that are best replies to some conjecture supported in ``opp_set``."""
    poly = BeliefPolytope.simplex(game, player, opp_set)
    return frozenset(
        a for a in range(game.n_actions(player)) if justifiable_in_polytope(game, player, a, poly) is not None
    )


def justifying_conjecture(game: Game, player: int, action: int, opp_set: Iterable[int] | None = None):
    """A plain conjecture (within ``opp_set``) justifying ``action``, or ``None``."""
    if opp_set is None:
        opp_set = game.all_actions(opponent(player))
    poly = BeliefPolytope.simplex(game, player, opp_set)
    w = justifiable_in_polytope(game, player, action, poly)
    if w is None:
        return None
    return Conjecture(player, w.marginal(poly.n_opp))


def strictly_dominated(
    game: Game, player: int, action: int, own_support: Iterable[int], opp_set: Iterable[int]
) -> tuple[bool, MixedStrategy | None]:
    """Is ``action`` strictly dominated by a mixture over ``own_support`` on
    every opponent action in ``opp_set``?"""
    own = sorted(own_support)
    opp = sorted(opp_set)
    if not opp:
        raise InvalidInput("opponent set must be nonempty")
    if action not in own:
        raise InvalidInput("action must belong to its own support")
    system = LinearSystem()
    for b in own:
        system.add_variable(("alpha", b))
    system.add_variable(SLACK, free=True)
    system.add({("alpha", b): 1 for b in own}, "==", 1)
    pay = game.payoffs[player]
    for a in opp:
        coeffs = {("alpha", b): pay[b][a] for b in own}
        coeffs[SLACK] = Fraction(-1)
        system.add(coeffs, ">=", pay[action][a])
    res = max_slack(system)
    if res.status != OPTIMAL or res.slack <= 0:
        return False, None
    weights = [Fraction(0)] * game.n_actions(player)
    for b in own:
        weights[b] = res.assignment[("alpha", b)]
    for a in opp:
        margin = sum((weights[b] * pay[b][a] for b in own), Fraction(0)) - pay[action][a]
        if margin <= 0:
            raise AssertionError("dominance witness failed exact re-verification")
    return True, MixedStrategy(player, tuple(weights))


def exact_best_reply_witness(
    game: Game, player: int, members: Iterable[int], opp_support: Iterable[int] | None = None
) -> tuple[Fraction | None, Conjecture | None]:
    """Search a conjecture whose best-reply set is exactly ``members``.

    Returns ``(slack, conjecture)``; ``slack`` is the margin of the members
    over the best non-member (``None`` when every action is a member). The
    conjecture is ``None`` when ``members`` is not an exact best-reply set.
    """
    members = sorted(members)
    opp = game.all_actions(opponent(player)) if opp_support is None else frozenset(opp_support)
    opp = sorted(opp)
    outside = [a for a in range(game.n_actions(player)) if a not in members]
    pay = game.payoffs[player]
    system = LinearSystem()
    for b in opp:
        system.add_variable(("nu", b))
    system.add({("nu", b): 1 for b in opp}, "==", 1)
    base = members[0]
    for x in members[1:]:
        system.add({("nu", b): pay[x][b] - pay[base][b] for b in opp}, "==", 0)
    if outside:
        for y in outside:
            coeffs = {("nu", b): pay[base][b] - pay[y][b] for b in opp}
            coeffs[SLACK] = Fraction(-1)
            if SLACK not in system.variables:
                system.add_variable(SLACK, free=True)
            system.add(coeffs, ">=", 0)
        res = max_slack(system)
        if res.status != OPTIMAL or res.slack <= 0:
            return None, None
        slack, assignment = res.slack, res.assignment
    else:
        res = solve(system)
        if res.status != OPTIMAL:
            return None, None
        slack, assignment = None, res.assignment
    weights = [Fraction(0)] * game.n_actions(opponent(player))
    for b in opp:
        weights[b] = assignment[("nu", b)]
    conj = Conjecture(player, tuple(weights))
    if best_reply(game, player, conj) != frozenset(members):
        raise AssertionError("exact best-reply witness failed re-verification")
    return slack, conj


def ebrs_enumerate(
    game: Game,
    player: int,
    opp_support: Iterable[int] | None = None,
    max_actions: int = DEFAULT_MAX_ACTIONS,
    warn_subsets: int = DEFAULT_WARN_SUBSETS,
) -> list[tuple[ActionSet, Conjecture]]:
    """All exact best-reply sets of ``player`` with a witness each.

    With ``opp_support`` only conjectures supported there are considered.
    Output order: by set size, then by action indices.
    """
    n = game.n_actions(player)
    if n > max_actions:
        raise CapacityError(f"EBRS enumeration over {n} actions exceeds the limit of {max_actions}")
    if 2**n > warn_subsets:
        warnings.warn(f"EBRS enumeration visits {2**n - 1} subsets", RuntimeWarning, stacklevel=2)
    out = []
    for size in range(1, n + 1):
        for members in itertools.combinations(range(n), size):
            _, conj = exact_best_reply_witness(game, player, members, opp_support)
            if conj is not None:
                out.append((frozenset(members), conj))
    return out
