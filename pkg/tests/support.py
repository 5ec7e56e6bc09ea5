"""Shared games, golden grids and random generators for the test suite."""

from __future__ import annotations

import random
import re
from fractions import Fraction
from pathlib import Path

from deltarat import Anchor, Game, rationalizability

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

LABELS = (("U", "M", "D"), ("l", "c", "r"))

# (u1, u2) cells, rows U M D, columns l c r; built directly, not via the parser
SOLVABLE = Game.from_bimatrix(
    [[(3, 2), (2, 1), (1, 0)], [(2, 2), (3, 1), (2, 0)], [(1, 1), (1, 2), (3, 0)]], LABELS
)
LEVEL2_GAP = Game.from_bimatrix(
    [[(6, 3), (0, 6), (0, 0)], [(0, 3), (6, 0), (0, 6)], [(4, 0), (4, 6), (4, 6)]], LABELS
)
MIDPOINT_TIE = Game.from_bimatrix(
    [[(3, 2), (0, 0), (0, 1)], [(0, 0), (3, 2), (0, 1)], [(9, 2), (9, 2), (9, 0)]], LABELS
)

ANCHOR_DR = Anchor.dirac(SOLVABLE, "D", "r")
ANCHOR_UL = Anchor.dirac(SOLVABLE, "U", "l")

# rows k = 1..4, columns n = 1..4; each cell "P1 set , P2 set"
GOLDEN_DOWNWARD_DR = [
    ["{D},{c}", "{D},{c}", "{D},{c}", "{D},{c}"],
    ["{U,M,D},{l,c}", "{M,D},{c}", "{M,D},{c}", "{M,D},{c}"],
    ["{U,M,D},{l,c}", "{U,M,D},{l,c}", "{M,D},{l,c}", "{M,D},{l,c}"],
    ["{U,M,D},{l,c}", "{U,M,D},{l,c}", "{U,M,D},{l,c}", "{U,M,D},{l,c}"],
]
GOLDEN_DOWNWARD_UL = [
    ["{U},{l}", "{U},{l}", "{U},{l}", "{U},{l}"],
    ["{U,M,D},{l,c}", "{U},{l}", "{U},{l}", "{U},{l}"],
    ["{U,M,D},{l,c}", "{U,M},{l,c}", "{U},{l}", "{U},{l}"],
    ["{U,M,D},{l,c}", "{U,M},{l,c}", "{U,M},{l}", "{U},{l}"],
]
GOLDEN_LEVELK_DR = [
    ["{D},{c}", "{D},{c}", "{D},{c}", "{D},{c}"],
    ["{U,M,D},{l,c}", "{M},{c}", "{M},{c}", "{M},{c}"],
    ["{U,M,D},{l,c}", "{U,M},{l,c}", "{M},{l}", "{M},{l}"],
    ["{U,M,D},{l,c}", "{U,M},{l,c}", "{U,M},{l}", "{U},{l}"],
]
# reference grid copied verbatim; the kernel disagrees at row 4, column 1 (see the CH first-column test)
GOLDEN_CH_GEOMETRIC_DR = [
    ["{D},{c}", "{D},{c}", "{D},{c}", "{D},{c}"],
    ["{M,D},{c}", "{M,D},{c}", "{M,D},{c}", "{M,D},{c}"],
    ["{M,D},{c}", "{M},{c}", "{M},{c}", "{M},{c}"],
    ["{M,D},{l,c}", "{M},{c}", "{M},{c}", "{M},{c}"],
]


def parse_cell(game: Game, text: str) -> tuple[frozenset, frozenset]:
    left, right = re.fullmatch(r"\{([^}]*)\},\s*\{([^}]*)\}", text.replace(" ", "")).groups()
    return (
        game.action_set(0, [x for x in left.split(",") if x]),
        game.action_set(1, [x for x in right.split(",") if x]),
    )


def grid_mismatches(grid, golden) -> list[str]:
    """Human-readable list of cells where ``grid`` differs from ``golden``."""
    game = grid.game
    out = []
    for k, row in enumerate(golden, start=1):
        for n, text in enumerate(row, start=1):
            want = parse_cell(game, text)
            got = (grid.cell(0, k, n), grid.cell(1, k, n))
            if got != want:
                fmt = lambda i, s: "{" + ",".join(game.labels(i, s)) + "}"
                out.append(f"(k={k}, n={n}): got {fmt(0, got[0])},{fmt(1, got[1])} expected {text}")
    return out


# -- random inputs ----------------------------------------------------------


def random_game(rng: random.Random, min_size: int = 2, max_size: int = 4, lo: int = -9, hi: int = 9) -> Game:
    m, n = rng.randint(min_size, max_size), rng.randint(min_size, max_size)
    return Game.from_bimatrix([[(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(n)] for _ in range(m)])


def random_dist(rng: random.Random, n: int, max_den: int = 6, support=None) -> tuple[Fraction, ...]:
    """Random distribution with denominator at most ``max_den``, optionally
    supported inside ``support``."""
    idx = sorted(range(n) if support is None else support)
    d = rng.randint(1, max_den)
    cuts = sorted(rng.randint(0, d) for _ in range(len(idx) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
    out = [Fraction(0)] * n
    for j, x in zip(idx, parts):
        out[j] = Fraction(x, d)
    return tuple(out)


def random_anchor(rng: random.Random, game: Game, max_den: int = 6, supports=(None, None)) -> Anchor:
    return Anchor(tuple(random_dist(rng, game.n_actions(i), max_den, supports[i]) for i in (0, 1)))


def full_support_dist(rng: random.Random, n: int, max_den: int = 12) -> tuple[Fraction, ...]:
    d = rng.randint(n, max_den)
    cuts = sorted(rng.sample(range(1, d), n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
    return tuple(Fraction(x, d) for x in parts)


def dominance_solvable_game(rng: random.Random, max_tries: int = 500) -> Game:
    """Perturb random payoffs until iterated dominance ends at a single profile."""
    game = random_game(rng, 2, 4)
    for _ in range(max_tries):
        tr = rationalizability(game)
        if len(tr.limit(0)) == 1 and len(tr.limit(1)) == 1:
            return game
        rows = [[list(cell) for cell in zip(game.payoffs[0][r], [game.payoffs[1][c][r] for c in range(game.n_actions(1))])]
                for r in range(game.n_actions(0))]
        r, c, p = rng.randrange(len(rows)), rng.randrange(len(rows[0])), rng.randrange(2)
        rows[r][c][p] = Fraction(rng.randint(-9, 9))
        game = Game.from_bimatrix([[tuple(cell) for cell in row] for row in rows])
    raise RuntimeError("no dominance-solvable game found")
