"""Compare the numba and numpy backends of the lattice oracle.

Each backend runs in its own interpreter because the choice is made at import
time from ``DELTARAT_NUMBA``. The workload replays every membership query of
the four reference grids of the solvable 3x3 game at a given bound. A warm-up
pass (numba compilation, lattice caches) is excluded from the timing.

    python3 benchmarks/bench_oracle.py [--bound 60] [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from fractions import Fraction
from deltarat import Anchor, CognitiveHierarchy, Downward, LevelDistribution, LevelK, TypeIndex
from deltarat import build_restriction_polytope, delta_grid, parse_game
from deltarat.oracle import backend, oracle_grid_sample
from deltarat.oracle.sampler import _lattice

bound, repeat, game_path = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
game = parse_game(open(game_path).read())
dr, ul = Anchor.dirac(game, "D", "r"), Anchor.dirac(game, "U", "l")
cases = [(Downward(), dr), (Downward(), ul), (LevelK(), dr),
         (CognitiveHierarchy(LevelDistribution.geometric(Fraction(1, 2))), dr)]
queries = []
for model, anchor in cases:
    grid = delta_grid(game, model, anchor, 4, 4)
    for n in range(4):
        prev = tuple(tuple(grid.cell(i, k, n) for k in range(5)) for i in (0, 1))
        for i in (0, 1):
            for k in range(1, 5):
                poly = build_restriction_polytope(game, model, anchor, TypeIndex(i, k), prev)
                queries.extend((i, a, poly) for a in range(game.n_actions(i)))

def run():
    return [oracle_grid_sample(game, i, a, poly, bound).found for i, a, poly in queries]

answers = run()  # warm-up: compile and build lattices
best_scan = float("inf")
for _ in range(repeat):
    t = time.perf_counter(); run(); best_scan = min(best_scan, time.perf_counter() - t)
best_cold = float("inf")
for _ in range(repeat):
    _lattice.cache_clear()
    t = time.perf_counter(); run(); best_cold = min(best_cold, time.perf_counter() - t)
print(json.dumps({"backend": backend(), "queries": len(queries), "scan_s": best_scan,
                  "with_lattice_s": best_cold, "answers": answers}))
"""


def run_backend(flag: str, bound: int, repeat: int, game_path: str) -> dict:
    env = dict(os.environ, DELTARAT_NUMBA=flag)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(bound), str(repeat), game_path],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main() -> None:
    here = os.path.dirname(os.path.abspath(__file__))
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bound", type=int, default=60)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--game", default=os.path.join(here, "..", "fixtures", "solvable3x3.game"))
    args = parser.parse_args()

    results = [run_backend(flag, args.bound, args.repeat, args.game) for flag in ("1", "0")]
    if results[0]["answers"] != results[1]["answers"]:
        sys.exit("backends disagree")
    print(f"bound {args.bound}, {results[0]['queries']} queries, best of {args.repeat}")
    print(f"{'backend':8} {'scan only (s)':>14} {'with lattice build (s)':>24}")
    for r in results:
        print(f"{r['backend']:8} {r['scan_s']:14.4f} {r['with_lattice_s']:24.4f}")


if __name__ == "__main__":
    main()
