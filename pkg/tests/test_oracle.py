import json
import os
import random
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from deltarat import BeliefPolytope, InvalidInput, justifiable_in_polytope
from deltarat.lp import Block
from deltarat.oracle import backend, kernels, oracle_grid_sample
from support import MIDPOINT_TIE, SOLVABLE, random_game


@pytest.mark.parametrize("bound, found", [(1, False), (2, True), (3, False), (12, True), (59, False), (60, True)])
def test_midpoint_witness_needs_even_denominator(bound, found):
    poly = BeliefPolytope.simplex(MIDPOINT_TIE, 1, MIDPOINT_TIE.action_set(0, ["U", "M"]))
    r = MIDPOINT_TIE.index(1, "r")
    res = oracle_grid_sample(MIDPOINT_TIE, 1, r, poly, bound)
    assert res.found is found
    if found:
        assert res.witness.marginal(3) == (F(1, 2), F(1, 2), F(0))
    else:
        assert res.points == bound + 1


def test_unjustifiable_action_is_never_hit():
    poly = BeliefPolytope.simplex(SOLVABLE, 1, SOLVABLE.all_actions(0))
    r = SOLVABLE.index(1, "r")
    assert justifiable_in_polytope(SOLVABLE, 1, r, poly) is None
    assert not oracle_grid_sample(SOLVABLE, 1, r, poly, 60).found


def test_single_point_polytope():
    anchor = (F(1, 3), F(1, 3), F(1, 3))
    poly = BeliefPolytope(0, None, 3, (Block(0, (0, 1, 2), F(1), anchor),))
    hits = [a for a in range(3) if oracle_grid_sample(SOLVABLE, 0, a, poly, 5).found]
    assert hits == [SOLVABLE.index(0, "M")]
    assert oracle_grid_sample(SOLVABLE, 0, 1, poly, 5).points == 1


def test_oracle_argument_checks():
    poly = BeliefPolytope.simplex(SOLVABLE, 0, {0})
    with pytest.raises(InvalidInput):
        oracle_grid_sample(SOLVABLE, 0, 0, poly, 0)
    with pytest.raises(InvalidInput):
        oracle_grid_sample(SOLVABLE, 1, 0, poly, 3)
    mixed = BeliefPolytope(0, None, 3, (Block(0, (0,), F(1, 2)), Block(1, (1, 2))))
    with pytest.raises(InvalidInput):
        oracle_grid_sample(SOLVABLE, 0, 0, mixed, 3)


@pytest.mark.parametrize("total, parts", [(0, 1), (0, 3), (4, 1), (5, 2), (7, 4), (12, 3)])
def test_composition_backends_agree(total, parts):
    ref = kernels.compositions_numpy(total, parts)
    assert ref.shape[1] == parts and (ref.sum(axis=1) == total).all()
    assert len({tuple(r) for r in ref}) == len(ref)
    if kernels.NUMBA:
        assert np.array_equal(ref, kernels.compositions_numba(total, parts))


def test_best_reply_scan_backends_agree():
    if not kernels.NUMBA:
        pytest.skip("numba not installed")
    rng = random.Random(3)
    for _ in range(50):
        g = random_game(rng, 2, 4)
        pay = np.array([[int(v) for v in row] for row in g.payoffs[0]], dtype=np.int64)
        pts = kernels.compositions_numpy(rng.randint(1, 9), g.n_actions(1))
        for a in range(g.n_actions(0)):
            assert kernels.first_best_reply_numba(pay, pts, a) == kernels.first_best_reply_numpy(pay, pts, a)


def test_minkowski_sum_deduplicates():
    left = np.array([[0, 0], [1, 0]], dtype=np.int64)
    right = np.array([[0, 1], [1, 0], [0, 0]], dtype=np.int64)
    pts, li, ri = kernels.minkowski_unique(left, right, chunk=2)
    assert {tuple(p) for p in pts} == {(0, 1), (1, 0), (1, 1), (2, 0), (0, 0)}
    assert len(pts) == 5
    assert all((pts[j] == left[li[j]] + right[ri[j]]).all() for j in range(len(pts)))


_PROBE = """
import json
from deltarat.oracle import backend, oracle_grid_sample
from deltarat import BeliefPolytope
from support import MIDPOINT_TIE
poly = BeliefPolytope.simplex(MIDPOINT_TIE, 1, {0, 1, 2})
print(json.dumps([backend()] + [oracle_grid_sample(MIDPOINT_TIE, 1, a, poly, 10).points for a in range(3)]))
"""


def test_env_flag_selects_numpy_with_same_answers():
    tests_dir = os.path.dirname(__file__)
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, DELTARAT_NUMBA=flag, PYTHONPATH=tests_dir)
        proc = subprocess.run([sys.executable, "-c", _PROBE], env=env, capture_output=True, text=True, check=True)
        results[flag] = json.loads(proc.stdout)
    assert results["0"][0] == "numpy"
    assert results["1"][0] == backend() or not kernels.NUMBA
    assert results["0"][1:] == results["1"][1:]
