from fractions import Fraction as F

import pytest

from deltarat import Anchor, Game, InvalidInput, LevelDistribution, cognitive_hierarchy, level_k, rationalizability
from deltarat.core import best_reply
from support import ANCHOR_DR, LEVEL2_GAP, SOLVABLE

PENNIES = Game.from_bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]], (("H", "T"), ("h", "t")))


def test_elimination_records_dominators():
    tr = rationalizability(SOLVABLE)
    r = SOLVABLE.index(1, "r")
    assert tr.dominators[(1, r)].weights[r] == 0
    assert set(tr.dominators) == {(0, 1), (0, 2), (1, 1), (1, 2)}
    assert tr.at(0, 99) == tr.limit(0)
    with pytest.raises(InvalidInput):
        tr.at(0, -1)


def test_nothing_dominated_in_level_two_gap_game():
    tr = rationalizability(LEVEL2_GAP)
    assert tr.fixpoint == 0 and tr.limit(1) == LEVEL2_GAP.all_actions(1)


def test_one_at_a_time_schedule_reaches_same_limit():
    tr = rationalizability(SOLVABLE, schedule=lambda rnd, i, dominated: {min(dominated)})
    assert (tr.limit(0), tr.limit(1)) == (rationalizability(SOLVABLE).limit(0), rationalizability(SOLVABLE).limit(1))
    with pytest.raises(InvalidInput):
        rationalizability(SOLVABLE, schedule=lambda rnd, i, dominated: set())


def test_level_k_cycles_in_matching_pennies():
    anchor = Anchor.dirac(PENNIES, "H", "h")
    lk = level_k(PENNIES, anchor, 9)
    for i in (0, 1):
        for k in range(1, 6):
            assert lk.level(i, k + 4) == lk.level(i, k)
    assert [PENNIES.labels(0, lk.level(0, k)) for k in range(1, 5)] == [["H"], ["T"], ["T"], ["H"]]
    assert [PENNIES.labels(1, lk.level(1, k)) for k in range(1, 5)] == [["t"], ["t"], ["h"], ["h"]]


def test_level_k_witnesses_justify_members():
    lk = level_k(SOLVABLE, ANCHOR_DR, 4)
    for (i, k, a), conj in lk.witnesses.items():
        assert a in best_reply(SOLVABLE, i, conj)
        if k > 1:
            assert conj.support <= lk.level(1 - i, k - 1)


def test_ch_level_one_is_best_reply_to_anchor():
    levels = LevelDistribution.geometric(F(1, 2))
    ch = cognitive_hierarchy(SOLVABLE, ANCHOR_DR, levels, 3)
    for i in (0, 1):
        assert ch.level(i, 1) == best_reply(SOLVABLE, i, ANCHOR_DR.conjecture_of(i))


def test_ch_rejects_short_weight_prefix():
    with pytest.raises(InvalidInput):
        cognitive_hierarchy(SOLVABLE, ANCHOR_DR, LevelDistribution.weights([1, 1]), 3)


def test_level_queries_validate_range():
    lk = level_k(SOLVABLE, ANCHOR_DR, 2)
    assert lk.k_max == 2
    with pytest.raises(InvalidInput):
        lk.level(0, 3)
    with pytest.raises(InvalidInput):
        level_k(SOLVABLE, ANCHOR_DR, 0)
