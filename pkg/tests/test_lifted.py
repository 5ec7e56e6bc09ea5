from fractions import Fraction as F

import pytest

from deltarat import (
    Anchor,
    CapacityError,
    CognitiveHierarchy,
    Downward,
    InvalidInput,
    LevelDistribution,
    LevelK,
    TypeIndex,
    build_restriction_polytope,
    consistent_types,
    delta_grid,
    limit_sets,
    rationalizability,
)
from deltarat.core import Conjecture, best_reply
from deltarat.oracle import oracle_grid_sample
from support import ANCHOR_DR, MIDPOINT_TIE, SOLVABLE

GEOMETRIC_HALF = LevelDistribution.geometric(F(1, 2))


def full_survivors(game, k_max):
    return tuple(tuple(game.all_actions(i) for _ in range(k_max + 1)) for i in (0, 1))


def test_downward_polytope_blocks():
    surv = full_survivors(SOLVABLE, 3)
    poly = build_restriction_polytope(SOLVABLE, Downward(), ANCHOR_DR, TypeIndex(0, 2), surv)
    assert [b.type for b in poly.blocks] == [0, 1]
    assert poly.blocks[0].anchor == ANCHOR_DR.dists[1] and poly.blocks[0].mass is None
    assert poly.blocks[1].anchor is None and poly.blocks[1].actions == (0, 1, 2)


def test_levelk_polytope_uses_only_previous_level():
    surv = full_survivors(SOLVABLE, 3)
    poly = build_restriction_polytope(SOLVABLE, LevelK(), ANCHOR_DR, TypeIndex(1, 3), surv)
    assert [b.type for b in poly.blocks] == [2]


def test_ch_polytope_block_masses():
    surv = full_survivors(SOLVABLE, 3)
    poly = build_restriction_polytope(SOLVABLE, CognitiveHierarchy(GEOMETRIC_HALF), ANCHOR_DR, TypeIndex(0, 2), surv)
    assert [b.mass for b in poly.blocks] == [F(2, 3), F(1, 3)]


def test_zero_types_hold_no_beliefs():
    with pytest.raises(InvalidInput):
        build_restriction_polytope(SOLVABLE, Downward(), ANCHOR_DR, TypeIndex(0, 0), full_survivors(SOLVABLE, 2))


def test_row_zero_and_column_zero_are_full():
    grid = delta_grid(SOLVABLE, Downward(), ANCHOR_DR, 3, 3)
    for i in (0, 1):
        assert all(grid.cell(i, 0, n) == SOLVABLE.all_actions(i) for n in range(4))
        assert all(grid.cell(i, k, 0) == SOLVABLE.all_actions(i) for k in range(4))


def test_grid_witness_marginals_justify_members():
    grid = delta_grid(SOLVABLE, CognitiveHierarchy(GEOMETRIC_HALF), ANCHOR_DR, 3, 3)
    for (i, k, n, a), w in grid.witnesses.items():
        marginal = w.marginal(SOLVABLE.n_actions(1 - i))
        assert a in best_reply(SOLVABLE, i, Conjecture(i, marginal))
        assert a in grid.cell(i, k, n)


def test_ch_first_column_never_keeps_l_under_dirac_d_anchor():
    # level-0 mass exceeds 1/2 at every truncation of geometric(1/2), so c beats l
    grid = delta_grid(SOLVABLE, CognitiveHierarchy(GEOMETRIC_HALF), ANCHOR_DR, 6, 1)
    l, c = SOLVABLE.index(1, "l"), SOLVABLE.index(1, "c")
    for k in range(1, 7):
        assert grid.cell(1, k, 1) == {c}
    surv = full_survivors(SOLVABLE, 4)
    poly = build_restriction_polytope(SOLVABLE, CognitiveHierarchy(GEOMETRIC_HALF), ANCHOR_DR, TypeIndex(1, 4), surv)
    assert poly.blocks[0].mass == F(8, 15)
    assert not oracle_grid_sample(SOLVABLE, 1, l, poly, 60).found


def test_r_survives_first_column_for_two_point_anchor():
    # anchor on {U, M} that is not the even mix still keeps r at n = 1
    anchor = Anchor(((F(3, 5), F(2, 5), F(0)), (F(1, 3),) * 3))
    grid = delta_grid(MIDPOINT_TIE, CognitiveHierarchy(GEOMETRIC_HALF), anchor, 2, 2)
    r = MIDPOINT_TIE.index(1, "r")
    assert r in grid.cell(1, 2, 1)
    assert r not in grid.cell(1, 2, 2)


def test_limit_sets_and_consistent_types():
    grid = delta_grid(SOLVABLE, LevelK(), ANCHOR_DR, 4, 4)
    limits = limit_sets(grid)
    assert SOLVABLE.labels(0, limits[0][4]) == ["U"]
    tr = rationalizability(SOLVABLE)
    assert consistent_types(grid, tr, 0) == (frozenset(range(1, 5)),) * 2
    assert 3 in consistent_types(grid, tr, 3)[0]
    with pytest.raises(InvalidInput):
        consistent_types(grid, tr, 5)
    with pytest.raises(InvalidInput):
        limit_sets(delta_grid(SOLVABLE, LevelK(), ANCHOR_DR, 4, 2))


def test_grid_guards():
    with pytest.raises(CapacityError):
        delta_grid(SOLVABLE, Downward(), ANCHOR_DR, 10, 10, max_work=100)
    with pytest.raises(InvalidInput):
        delta_grid(SOLVABLE, Downward(), ANCHOR_DR, 0, 2)
    with pytest.raises(InvalidInput):
        delta_grid(SOLVABLE, CognitiveHierarchy(LevelDistribution.weights([1, 1])), ANCHOR_DR, 3, 3)
    with pytest.raises(InvalidInput):
        delta_grid(SOLVABLE, Downward(), Anchor(((F(1),), (F(1),))), 2, 2)
