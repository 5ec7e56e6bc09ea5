"""Exact domain types for two-player finite games and level-based reasoning.

All numbers are :class:`fractions.Fraction`; nothing in this module touches
floating point. Players are indexed ``0`` and ``1`` and actions by their
position in the game's declared action list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
ActionSet = frozenset  # frozenset[int] of action indices; player implied by context

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class InvalidInput(ValueError):
    """Raised for malformed games, distributions, or arguments."""


class CapacityError(RuntimeError):
    """Raised when a computation would exceed a configured size guard."""


def parse_rational(text: str) -> Fraction:
    """Parse an integer or ``a/b`` literal into a canonical Fraction."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise InvalidInput(f"not a rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InvalidInput(f"zero denominator in {text!r}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidInput(f"cannot use {value!r} as an exact rational")


def check_distribution(weights: Sequence[Fraction], what: str = "distribution") -> tuple[Fraction, ...]:
    weights = tuple(as_rational(w) for w in weights)
    if any(w < 0 for w in weights):
        raise InvalidInput(f"{what} has a negative weight")
    total = sum(weights, Fraction(0))
    if total != 1:
        raise InvalidInput(f"{what} sums to {format_rational(total)}, not 1")
    return weights


@dataclass(frozen=True)
class Game:
    """Two-player normal-form game with exact payoffs.

    ``payoffs[i][a][b]`` is player ``i``'s payoff when ``i`` plays own action
    ``a`` and the opponent plays ``b``.
    """

    players: tuple[str, str]
    actions: tuple[tuple[str, ...], tuple[str, ...]]
    payoffs: tuple[tuple[tuple[Fraction, ...], ...], tuple[tuple[Fraction, ...], ...]]

    def __post_init__(self):
        if len(self.players) != 2 or len(self.actions) != 2 or len(self.payoffs) != 2:
            raise InvalidInput("games have exactly two players")
        if self.players[0] == self.players[1]:
            raise InvalidInput("player names must differ")
        for i in (0, 1):
            labels = self.actions[i]
            if not labels:
                raise InvalidInput(f"player {self.players[i]} has no actions")
            if len(set(labels)) != len(labels):
                raise InvalidInput(f"duplicate action label for player {self.players[i]}")
            rows = self.payoffs[i]
            if len(rows) != len(labels) or any(len(r) != len(self.actions[1 - i]) for r in rows):
                raise InvalidInput(f"payoff matrix of player {self.players[i]} has the wrong shape")
        # games are used as cache keys on hot paths; hash the payoff tables once
        object.__setattr__(self, "_hash", hash((self.players, self.actions, self.payoffs)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def from_bimatrix(cls, rows: Sequence[Sequence[tuple]], actions=None, players=("P1", "P2")) -> "Game":
        """Build from a table of ``(u1, u2)`` cells indexed ``[row][column]``."""
        if not rows or not rows[0]:
            raise InvalidInput("a game needs at least one row and one column")
        n_rows, n_cols = len(rows), len(rows[0])
        if any(len(r) != n_cols for r in rows) or any(len(cell) != 2 for r in rows for cell in r):
            raise InvalidInput("bimatrix rows must have equal length and (u1, u2) cells")
        if actions is None:
            actions = ([f"a{j}" for j in range(n_rows)], [f"b{j}" for j in range(n_cols)])
        p1 = tuple(tuple(as_rational(rows[r][c][0]) for c in range(n_cols)) for r in range(n_rows))
        p2 = tuple(tuple(as_rational(rows[r][c][1]) for r in range(n_rows)) for c in range(n_cols))
        return cls(tuple(players), (tuple(actions[0]), tuple(actions[1])), (p1, p2))

    def n_actions(self, player: int) -> int:
        return len(self.actions[player])

    def all_actions(self, player: int) -> ActionSet:
        return frozenset(range(len(self.actions[player])))

    def payoff(self, player: int, own: int, opp: int) -> Fraction:
        return self.payoffs[player][own][opp]

    def index(self, player: int, label: str) -> int:
        try:
            return self.actions[player].index(label)
        except ValueError:
            raise InvalidInput(f"{label!r} is not an action of {self.players[player]}") from None

    def labels(self, player: int, members: Iterable[int]) -> list[str]:
        return [self.actions[player][a] for a in sorted(members)]

    def action_set(self, player: int, labels: Iterable[str]) -> ActionSet:
        return frozenset(self.index(player, x) for x in labels)

    def payoff_range(self, player: int) -> Fraction:
        values = [v for row in self.payoffs[player] for v in row]
        return max(values) - min(values)

    def transformed(self, player: int, scale: Fraction = Fraction(1), shift: Fraction = Fraction(0)) -> "Game":
        """Return a copy with ``player``'s payoffs mapped to ``scale*u + shift``."""
        scale, shift = as_rational(scale), as_rational(shift)
        if scale <= 0:
            raise InvalidInput("payoff scale must be positive")
        rows = tuple(tuple(scale * v + shift for v in row) for row in self.payoffs[player])
        payoffs = list(self.payoffs)
        payoffs[player] = rows
        return Game(self.players, self.actions, tuple(payoffs))


def opponent(player: int) -> int:
    return 1 - player


@dataclass(frozen=True)
class Conjecture:
    """Belief of ``player`` over the opponent's actions (dense weight vector)."""

    player: int
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", check_distribution(self.weights, "conjecture"))

    @classmethod
    def dirac(cls, game: Game, player: int, opp_action: int) -> "Conjecture":
        n = game.n_actions(opponent(player))
        return cls(player, tuple(Fraction(int(j == opp_action)) for j in range(n)))

    @classmethod
    def from_mapping(cls, game: Game, player: int, weights: Mapping[str, Fraction]) -> "Conjecture":
        opp = opponent(player)
        vec = [Fraction(0)] * game.n_actions(opp)
        for label, w in weights.items():
            vec[game.index(opp, label)] = as_rational(w)
        return cls(player, tuple(vec))

    @property
    def support(self) -> ActionSet:
        return frozenset(j for j, w in enumerate(self.weights) if w > 0)


@dataclass(frozen=True)
class Anchor:
    """Level-0 behaviour ``(p_1, p_2)``; ``dists[i]`` is over player i's own actions."""

    dists: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]

    def __post_init__(self):
        if len(self.dists) != 2:
            raise InvalidInput("an anchor has one distribution per player")
        object.__setattr__(
            self, "dists", tuple(check_distribution(d, f"anchor of player {i + 1}") for i, d in enumerate(self.dists))
        )

    @classmethod
    def dirac(cls, game: Game, label1: str, label2: str) -> "Anchor":
        return cls(
            (
                tuple(Fraction(int(a == label1)) for a in game.actions[0]),
                tuple(Fraction(int(a == label2)) for a in game.actions[1]),
            )
        )

    @classmethod
    def uniform(cls, game: Game) -> "Anchor":
        return cls(tuple(tuple(Fraction(1, game.n_actions(i)) for _ in range(game.n_actions(i))) for i in (0, 1)))

    def validate_for(self, game: Game) -> None:
        for i in (0, 1):
            if len(self.dists[i]) != game.n_actions(i):
                raise InvalidInput(f"anchor of player {i + 1} does not match the game's action count")

    def conjecture_of(self, player: int) -> Conjecture:
        """The belief a 1-type of ``player`` holds: the opponent's anchor."""
        return Conjecture(player, self.dists[opponent(player)])

    def with_component(self, player: int, dist: Sequence[Fraction]) -> "Anchor":
        dists = list(self.dists)
        dists[player] = tuple(dist)
        return Anchor(tuple(dists))


@dataclass(frozen=True)
class LevelDistribution:
    """Full-support level distribution, represented only through the weights it
    needs: a closed form (``geometric``, ``lexicographic``) or an explicit
    positive weight prefix.

    ``geometric(q)`` has ``f(t) = q (1-q)^t``. ``lexicographic(eps)`` has
    ``f(0) = (1-2 eps)/(1-eps)`` and ``f(t) = eps^t`` for ``t >= 1``.
    """

    kind: str
    param: Fraction | None = None
    prefix: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind == "geometric":
            q = as_rational(self.param)
            if not 0 < q < 1:
                raise InvalidInput("geometric parameter must lie in (0, 1)")
            object.__setattr__(self, "param", q)
        elif self.kind == "lexicographic":
            eps = as_rational(self.param)
            if not 0 < eps < Fraction(1, 2):
                raise InvalidInput("lexicographic epsilon must lie in (0, 1/2)")
            object.__setattr__(self, "param", eps)
        elif self.kind == "weights":
            prefix = tuple(as_rational(w) for w in self.prefix)
            if not prefix or any(w <= 0 for w in prefix):
                raise InvalidInput("level weights must be a nonempty list of positive rationals")
            object.__setattr__(self, "prefix", prefix)
        else:
            raise InvalidInput(f"unknown level distribution kind {self.kind!r}")

    @classmethod
    def geometric(cls, q) -> "LevelDistribution":
        return cls("geometric", as_rational(q))

    @classmethod
    def lexicographic(cls, eps) -> "LevelDistribution":
        return cls("lexicographic", as_rational(eps))

    @classmethod
    def weights(cls, prefix: Sequence) -> "LevelDistribution":
        return cls("weights", None, tuple(as_rational(w) for w in prefix))

    @property
    def horizon(self) -> int | None:
        """Largest ``k`` for which ``truncate(k)`` is defined (None = unbounded)."""
        return len(self.prefix) if self.kind == "weights" else None

    def weight(self, t: int) -> Fraction:
        if t < 0:
            raise InvalidInput("levels are non-negative")
        if self.kind == "geometric":
            return self.param * (1 - self.param) ** t
        if self.kind == "lexicographic":
            eps = self.param
            return (1 - 2 * eps) / (1 - eps) if t == 0 else eps**t
        if t >= len(self.prefix):
            raise InvalidInput(f"level weight {t} is beyond the supplied prefix of length {len(self.prefix)}")
        return self.prefix[t]

    def truncate(self, k: int) -> tuple[Fraction, ...]:
        return truncate_levels(self, k)

    def describe(self) -> dict:
        if self.kind == "weights":
            return {"kind": "weights", "weights": [format_rational(w) for w in self.prefix]}
        key = "param" if self.kind == "geometric" else "epsilon"
        return {"kind": self.kind, key: format_rational(self.param)}


def truncate_levels(dist: LevelDistribution, k: int) -> tuple[Fraction, ...]:
    """Normalised truncation of ``dist`` to levels ``0..k-1``."""
    if k < 1:
        raise InvalidInput("truncation needs k >= 1")
    raw = [dist.weight(t) for t in range(k)]
    total = sum(raw, Fraction(0))
    return tuple(w / total for w in raw)


@dataclass(frozen=True)
class TypeIndex:
    player: int
    k: int


@dataclass(frozen=True)
class Downward:
    name: str = field(default="downward", init=False)


@dataclass(frozen=True)
class LevelK:
    name: str = field(default="levelk", init=False)


@dataclass(frozen=True)
class CognitiveHierarchy:
    levels: LevelDistribution
    name: str = field(default="ch", init=False)

    def __post_init__(self):
        if not isinstance(self.levels, LevelDistribution):
            raise InvalidInput("cognitive hierarchy needs a level distribution")


RestrictionModel = Union[Downward, LevelK, CognitiveHierarchy]


def model_from_name(name: str, levels: LevelDistribution | None = None) -> RestrictionModel:
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("downward", "d"):
        return Downward()
    if key in ("levelk", "l"):
        return LevelK()
    if key in ("ch", "cognitivehierarchy", "c"):
        if levels is None:
            raise InvalidInput("the ch model requires a level distribution")
        return CognitiveHierarchy(levels)
    raise InvalidInput(f"unknown model {name!r}")


@dataclass(frozen=True)
class SolutionGrid:
    """Per-player table ``cells[i][k][n]`` of surviving actions, ``k`` in
    ``0..k_max`` and ``n`` in ``0..n_max``.

    ``witnesses`` maps ``(i, k, n, action)`` to the lifted conjecture that
    justified the action at that cell (``n >= 1``, ``k >= 1``).
    """

    game: Game
    model: RestrictionModel
    anchor: Anchor
    k_max: int
    n_max: int
    cells: tuple
    witnesses: Mapping = field(default_factory=dict, compare=False, repr=False)

    def cell(self, player: int, k: int, n: int) -> ActionSet:
        return self.cells[player][k][n]

    def row(self, player: int, k: int) -> tuple[ActionSet, ...]:
        return self.cells[player][k]


def expected_payoff(game: Game, player: int, action: int, conjecture: Conjecture) -> Fraction:
    """Exact expected payoff of ``action`` against ``conjecture``."""
    if conjecture.player != player:
        raise InvalidInput("conjecture belongs to the other player")
    if not 0 <= action < game.n_actions(player):
        raise InvalidInput(f"action index {action} out of range")
    if len(conjecture.weights) != game.n_actions(opponent(player)):
        raise InvalidInput("conjecture is not over the opponent's actions")
    row = game.payoffs[player][action]
    return sum((w * row[b] for b, w in enumerate(conjecture.weights) if w), Fraction(0))


def best_reply(game: Game, player: int, conjecture: Conjecture) -> ActionSet:
    values = [expected_payoff(game, player, a, conjecture) for a in range(game.n_actions(player))]
    top = max(values)
    return frozenset(a for a, v in enumerate(values) if v == top)


def marginal_payoffs(game: Game, player: int, marginal: Sequence[Fraction]) -> list[Fraction]:
    """Expected payoff of every own action against an opponent-action vector."""
    return [
        sum((w * row[b] for b, w in enumerate(marginal) if w), Fraction(0)) for row in game.payoffs[player]
    ]
