"""Behaviour across all anchors and level distributions.

Each routine returns witnesses (anchors, conjectures, epsilon values) that can
be replayed through the forward solvers and re-checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    ActionSet,
    Anchor,
    CognitiveHierarchy,
    Conjecture,
    Downward,
    Game,
    InvalidInput,
    LevelDistribution,
    best_reply,
    opponent,
    truncate_levels,
)
from .lifted import delta_grid, limit_sets
from .lp import DEFAULT_MAX_ACTIONS, ebrs_enumerate, exact_best_reply_witness, justifiable_set, justifying_conjecture

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
PARTIAL = "partial"


def _set_key(s: ActionSet):
    return (len(s), tuple(sorted(s)))


def _uniform(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n) for _ in range(n))


def anchor_with(game: Game, player: int, dist: Sequence[Fraction]) -> Anchor:
    """Anchor whose ``player`` component is ``dist``; the other is uniform."""
    other = opponent(player)
    dists = [None, None]
    dists[player] = tuple(dist)
    dists[other] = _uniform(game.n_actions(other))
    return Anchor(tuple(dists))


@dataclass(frozen=True)
class FamilyMember:
    """One achievable level-``t`` set with its provenance.

    ``parent`` is the opponent's level-``t-1`` set it was derived from (None at
    ``t = 1``, where ``conjecture`` is the opponent anchor component producing it).
    """

    actions: ActionSet
    parent: ActionSet | None
    conjecture: Conjecture | None


@dataclass(frozen=True)
class RobustLevelK:
    """``families[i][t]`` lists the achievable ``L_i^t`` sets; ``unions[i][t]`` their union."""

    game: Game
    k_max: int
    families: tuple[dict, dict]
    unions: tuple[dict, dict]

    def members(self, player: int, t: int) -> list[ActionSet]:
        return [m.actions for m in self.families[player][t]]

    def anchor_for(self, player: int, t: int, actions: ActionSet) -> Anchor:
        """An anchor under which classic level-``t`` of ``player`` is exactly ``actions``."""
        members = {m.actions: m for m in self.families[player][t]}
        if actions not in members:
            raise InvalidInput("set is not in the family")
        who, level, cur = player, t, members[actions]
        while cur.parent is not None:
            who, level = opponent(who), level - 1
            cur = next(m for m in self.families[who][level] if m.actions == cur.parent)
        # cur is a level-1 member of `who`, produced by the opponent's anchor component
        return anchor_with(self.game, opponent(who), cur.conjecture.weights)


def robust_level_k(game: Game, k_max: int, max_actions: int = DEFAULT_MAX_ACTIONS) -> RobustLevelK:
    """Propagate exact best-reply sets through the justifiable-set map."""
    if k_max < 1:
        raise InvalidInput("k_max must be at least 1")
    families = ({}, {})
    for i in (0, 1):
        families[i][1] = [FamilyMember(s, None, conj) for s, conj in ebrs_enumerate(game, i, max_actions=max_actions)]
    for t in range(2, k_max + 1):
        for i in (0, 1):
            seen: dict[ActionSet, FamilyMember] = {}
            for parent in families[opponent(i)][t - 1]:
                s = justifiable_set(game, i, parent.actions)
                if s not in seen:
                    seen[s] = FamilyMember(s, parent.actions, None)
            families[i][t] = sorted(seen.values(), key=lambda m: _set_key(m.actions))
    unions = tuple({t: frozenset().union(*(m.actions for m in fam[t])) for t in fam} for fam in families)
    return RobustLevelK(game, k_max, families, unions)


def region_breakdown(game: Game, player: int, max_actions: int = DEFAULT_MAX_ACTIONS) -> list[tuple]:
    """For each opponent EBRS ``S``: ``(S, EBRS of player within S, their union)``.

    The union is the level-2 set of ``player`` for anchors in that region.
    """
    rows = []
    for s, _ in ebrs_enumerate(game, opponent(player), max_actions=max_actions):
        inner = [b for b, _ in ebrs_enumerate(game, player, opp_support=s, max_actions=max_actions)]
        rows.append((s, inner, frozenset().union(*inner)))
    return rows


@dataclass
class RobustnessReport:
    claim: str
    status: str
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED


def robust_downward_check(game: Game, k_max: int = 4) -> RobustnessReport:
    """Anchor-robust downward limits coincide with the justifiable actions.

    For each justifiable action the justifying conjecture becomes the
    opponent's anchor component; the action must then survive in the limit of
    every row ``1..k_max``. Conversely each limit action carries a lifted
    witness whose marginal makes it a best reply, so it is justifiable.
    """
    if k_max < 1:
        raise InvalidInput("k_max must be at least 1")
    report = RobustnessReport("downward-robust", VERIFIED)
    for i in (0, 1):
        r1 = justifiable_set(game, i, game.all_actions(opponent(i)))
        inter_union: set = set()
        union_union: set = set()
        for a in sorted(r1):
            conj = justifying_conjecture(game, i, a)
            anchor = anchor_with(game, opponent(i), conj.weights)
            grid = delta_grid(game, Downward(), anchor, k_max, k_max)
            limits = limit_sets(grid)[i]
            rows = [limits[k] for k in range(1, k_max + 1)]
            inter = frozenset.intersection(*rows)
            union = frozenset().union(*rows)
            inter_union |= inter
            union_union |= union
            # reverse inclusion: every limit action is a best reply to its witness marginal
            for k in range(1, k_max + 1):
                for b in limits[k]:
                    w = grid.witnesses[(i, k, k, b)]
                    marginal = Conjecture(i, w.marginal(game.n_actions(opponent(i))))
                    if b not in best_reply(game, i, marginal) or b not in r1:
                        report.status = COUNTEREXAMPLE
            report.witnesses.append(
                {"player": i, "action": a, "anchor": anchor, "conjecture": conj, "in_all_rows": a in inter}
            )
            if a not in inter:
                report.status = COUNTEREXAMPLE
        report.details[i] = {
            "justifiable": r1,
            "union_of_intersections": frozenset(inter_union),
            "union_of_unions": frozenset(union_union),
        }
        if not (frozenset(inter_union) == frozenset(union_union) == r1):
            report.status = COUNTEREXAMPLE
    return report


@dataclass(frozen=True)
class StrictWitness:
    conjecture: Conjecture
    slack: Fraction | None  # None when the player has a single action


def genericity_check(game: Game) -> tuple[dict, dict]:
    """Per player, ``action -> StrictWitness | None`` over justifiable actions.

    A witness makes the action the unique best reply with the given margin.
    """
    out = ({}, {})
    for i in (0, 1):
        for a in sorted(justifiable_set(game, i, game.all_actions(opponent(i)))):
            slack, conj = exact_best_reply_witness(game, i, [a])
            out[i][a] = None if conj is None else StrictWitness(conj, slack)
    return out


def is_generic(check: tuple[dict, dict]) -> bool:
    return all(w is not None for side in check for w in side.values())


def choose_epsilon(slack: Fraction | None, payoff_range: Fraction) -> Fraction:
    """Rational ``eps < 1/2`` with ``eps/(1-eps) < slack/(2*range)``."""
    if slack is None or payoff_range == 0:
        return Fraction(1, 4)
    if slack <= 0:
        raise InvalidInput("strict witness needs a positive margin")
    r = slack / (2 * payoff_range)
    return min(r / (2 * (1 + r)), Fraction(1, 4))


def robust_ch_generic(
    game: Game, k: int, n: int, probes: Iterable[tuple[Anchor, LevelDistribution]] = ()
) -> RobustnessReport:
    """Union over anchors and level distributions of CH-grid cell ``(k, n)``.

    Generic games get one witness per justifiable action: anchor = strict
    witness conjecture, levels = lexicographic(eps). Actions without a strict
    witness are tried against ``probes`` instead.
    """
    if k < 1 or n < 1:
        raise InvalidInput("k and n must be at least 1")
    check = genericity_check(game)
    probes = list(probes)
    report = RobustnessReport("ch-robust", VERIFIED if is_generic(check) else PARTIAL)
    for i in (0, 1):
        r1 = frozenset(check[i])
        union: set = set()
        missing = []
        for a, sw in sorted(check[i].items()):
            if sw is None:
                missing.append(a)
                continue
            W = game.payoff_range(i)
            eps = choose_epsilon(sw.slack, W)
            levels = LevelDistribution.lexicographic(eps)
            delta = 1 - truncate_levels(levels, k)[0]
            if not delta <= eps / (1 - eps):
                raise AssertionError("level-0 mass bound violated")
            if sw.slack is not None and W != 0 and not (1 - delta) * sw.slack - delta * W > 0:
                raise AssertionError("epsilon does not preserve the unique best reply")
            anchor = anchor_with(game, opponent(i), sw.conjecture.weights)
            grid = delta_grid(game, CognitiveHierarchy(levels), anchor, k, n)
            cell = grid.cell(i, k, n)
            if not cell <= r1:
                report.status = COUNTEREXAMPLE
            union |= cell
            ok = a in cell
            if not ok:
                report.status = COUNTEREXAMPLE
            report.witnesses.append(
                {"player": i, "action": a, "anchor": anchor, "epsilon": eps, "slack": sw.slack, "in_cell": ok}
            )
        probe_hits = {}
        for a in missing:
            hits = []
            for anchor, levels in probes:
                grid = delta_grid(game, CognitiveHierarchy(levels), anchor, k, n)
                cell = grid.cell(i, k, n)
                union |= cell
                hits.append(a in cell)
            probe_hits[a] = hits
        report.details[i] = {
            "justifiable": r1,
            "union": frozenset(union),
            "missing_strict_witness": tuple(missing),
            "probe_hits": probe_hits,
        }
        if report.status == VERIFIED and frozenset(union) != r1:
            report.status = COUNTEREXAMPLE
    return report
