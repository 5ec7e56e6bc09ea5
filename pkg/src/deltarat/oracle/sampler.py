"""Grid-sampling membership oracle for belief polytopes.

Enumerates lifted conjectures whose weights sit on a ``1/N`` lattice and
tests the best-reply condition by integer arithmetic. It shares no code with
the LP path beyond the polytope description itself. Hits are re-checked in
exact rationals; a miss only means nothing was found up to the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from ..core import Game, InvalidInput, best_reply, Conjecture, opponent
from ..lp import BeliefPolytope, LiftedConjecture
from . import kernels

_INT_LIMIT = 1 << 62


@dataclass(frozen=True)
class OracleResult:
    found: bool
    witness: LiftedConjecture | None
    points: int  # lattice points examined (all of them on a miss)
    bound: int


@dataclass
class _Lattice:
    points: np.ndarray  # (count, n_opp) integer marginals, scaled by `scale`
    scale: int
    decode: object  # row index -> {(type, action): Fraction}


def _den_lcm(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def _free_lattice(poly: BeliefPolytope, N: int) -> _Lattice:
    anchored = [b for b in poly.blocks if b.anchor is not None]
    loose = [b for b in poly.blocks if b.anchor is None]
    if len(anchored) > 1:
        raise InvalidInput("at most one anchored block is supported")
    union = sorted({a for b in loose for a in b.actions})
    p = anchored[0].anchor if anchored else None
    lp = _den_lcm(p) if p is not None else 1
    scale = N * lp
    chunks, meta = [], []
    j_values = range(N + 1) if anchored else [0]
    if not union:
        j_values = [N]
    for j in j_values:
        base = np.zeros(poly.n_opp, dtype=np.int64)
        if j:
            base += np.array([int(j * lp * w) for w in p], dtype=np.int64)
        rest = N - j
        if union:
            comps = kernels.compositions(rest, len(union))
            block = np.repeat(base[None, :], len(comps), axis=0)
            block[:, union] += comps * lp
        else:
            comps = np.zeros((1, 0), dtype=np.int64)
            block = base[None, :]
        chunks.append(block)
        meta.append((j, comps))
    points = np.concatenate(chunks)
    offsets = np.cumsum([0] + [len(c) for c in chunks])

    def decode(row: int) -> dict:
        k = int(np.searchsorted(offsets, row, side="right") - 1)
        j, comps = meta[k]
        comp = comps[row - offsets[k]]
        out = {}
        if j:
            blk = anchored[0]
            for a in blk.actions:
                if p[a]:
                    out[(blk.type, a)] = Fraction(j, N) * p[a]
        for pos, a in enumerate(union):
            if comp[pos]:
                owner = next(b for b in loose if a in b.actions)
                out[(owner.type, a)] = Fraction(int(comp[pos]), N)
        return out

    return _Lattice(points, scale, decode)


def _fixed_lattice(poly: BeliefPolytope, N: int) -> _Lattice:
    masses = [b.mass for b in poly.blocks]
    scale = N * _den_lcm(masses + [b.mass * w for b in poly.blocks if b.anchor is not None for w in b.anchor])
    base = np.zeros(poly.n_opp, dtype=np.int64)
    groups: dict[tuple, list] = {}
    for b in poly.blocks:
        if b.anchor is not None:
            base += np.array([int(scale * b.mass * w) for w in b.anchor], dtype=np.int64)
        else:
            groups.setdefault(b.actions, []).append(b)
    parts = []  # (support, blocks, compositions)
    for support, blocks in groups.items():
        comps = kernels.compositions(N, len(support))
        parts.append((support, blocks, comps))
    points = base[None, :]
    choice = np.zeros((1, 0), dtype=np.int64)
    for support, blocks, comps in parts:
        mass = sum((b.mass for b in blocks), Fraction(0))
        step = int(scale * mass / N)
        contrib = np.zeros((len(comps), poly.n_opp), dtype=np.int64)
        contrib[:, list(support)] = comps * step
        points, li, ri = kernels.minkowski_unique(points, contrib)
        choice = np.hstack([choice[li], ri[:, None]])

    def decode(row: int) -> dict:
        out = {}
        for b in poly.blocks:
            if b.anchor is not None:
                for a in b.actions:
                    if b.anchor[a]:
                        out[(b.type, a)] = b.mass * b.anchor[a]
        for g, (support, blocks, comps) in enumerate(parts):
            comp = comps[choice[row, g]]
            for b in blocks:
                for pos, a in enumerate(support):
                    if comp[pos]:
                        out[(b.type, a)] = b.mass * Fraction(int(comp[pos]), N)
        return out

    return _Lattice(points, scale, decode)


@lru_cache(maxsize=256)
def _lattice(poly: BeliefPolytope, N: int) -> _Lattice:
    fixed = [b.mass is not None for b in poly.blocks]
    if all(fixed):
        return _fixed_lattice(poly, N)
    if not any(fixed):
        return _free_lattice(poly, N)
    raise InvalidInput("polytopes mixing fixed and free block masses are not supported")


def _integer_payoffs(game: Game, player: int) -> np.ndarray:
    rows = game.payoffs[player]
    den = _den_lcm(v for row in rows for v in row)
    return np.array([[int(v * den) for v in row] for row in rows], dtype=np.int64)


def oracle_grid_sample(
    game: Game, player: int, action: int, polytope: BeliefPolytope, denominator_bound: int
) -> OracleResult:
    """Search the ``1/denominator_bound`` lattice of ``polytope`` for a
    conjecture making ``action`` a best reply."""
    if denominator_bound < 1:
        raise InvalidInput("denominator bound must be at least 1")
    if polytope.player != player or polytope.n_opp != game.n_actions(opponent(player)):
        raise InvalidInput("polytope does not belong to this player of this game")
    lat = _lattice(polytope, denominator_bound)
    pay = _integer_payoffs(game, player)
    worst = int(np.abs(pay).max(initial=0)) * lat.scale * polytope.n_opp
    if worst >= _INT_LIMIT:
        raise InvalidInput("payoffs too large for the integer oracle")
    row = kernels.first_best_reply(pay, lat.points, action)
    if row < 0:
        return OracleResult(False, None, len(lat.points), denominator_bound)
    point = lat.decode(row)
    marginal = polytope.marginal(point)
    if not polytope.contains(point) or action not in best_reply(game, player, Conjecture(player, marginal)):
        raise AssertionError("oracle lattice point failed exact re-verification")
    weights = tuple(sorted(point.items(), key=lambda x: (x[0][0] is not None, x[0])))
    return OracleResult(True, LiftedConjecture(player, polytope.owner, weights), row + 1, denominator_bound)
