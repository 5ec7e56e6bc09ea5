"""Integer lattice kernels for the sampling oracle.

Two interchangeable backends: numba-compiled loops and plain numpy. Set
``DELTARAT_NUMBA=0`` to force numpy; numba is also skipped when it is not
installed. Both return identical arrays.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    if os.environ.get("DELTARAT_NUMBA", "1") == "0":
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised by the env-flag test
    njit = None

NUMBA = njit is not None


def backend() -> str:
    return "numba" if NUMBA else "numpy"


# -- numpy ------------------------------------------------------------------


def compositions_numpy(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``,
    in lexicographically decreasing order of the leading entries."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(total + parts - 1), parts - 1)), dtype=np.int64)
    if bars.size == 0:
        return np.zeros((1, parts), dtype=np.int64)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), total + parts - 1)])
    return np.ascontiguousarray((np.diff(edges, axis=1) - 1)[::-1])


def first_best_reply_numpy(payoffs: np.ndarray, points: np.ndarray, action: int) -> int:
    values = points @ payoffs.T
    hit = values[:, action] == values.max(axis=1)
    idx = int(np.argmax(hit))
    return idx if hit[idx] else -1


# -- numba ------------------------------------------------------------------

if NUMBA:

    @njit(cache=True)
    def _count(total, parts):
        # binomial(total + parts - 1, parts - 1)
        r = 1
        for j in range(1, parts):
            r = r * (total + j) // j
        return r

    @njit(cache=True)
    def _compositions(total, parts):
        out = np.zeros((_count(total, parts), parts), dtype=np.int64)
        cur = np.zeros(parts, dtype=np.int64)
        cur[0] = total
        row = 0
        while True:
            out[row, :] = cur
            row += 1
            # find the last non-zero entry before the final slot
            j = parts - 2
            while j >= 0 and cur[j] == 0:
                j -= 1
            if j < 0:
                break
            cur[j] -= 1
            rest = cur[parts - 1] + 1
            cur[parts - 1] = 0
            cur[j + 1] = rest
        return out

    @njit(cache=True)
    def _first_best_reply(payoffs, points, action):
        n_own, n_opp = payoffs.shape
        for p in range(points.shape[0]):
            own = 0
            for b in range(n_opp):
                own += payoffs[action, b] * points[p, b]
            ok = True
            for a in range(n_own):
                if a == action:
                    continue
                v = 0
                for b in range(n_opp):
                    v += payoffs[a, b] * points[p, b]
                if v > own:
                    ok = False
                    break
            if ok:
                return p
        return -1

    def compositions_numba(total: int, parts: int) -> np.ndarray:
        return _compositions(np.int64(total), np.int64(parts))

    def first_best_reply_numba(payoffs: np.ndarray, points: np.ndarray, action: int) -> int:
        return int(_first_best_reply(payoffs, points, np.int64(action)))

    compositions = compositions_numba
    first_best_reply = first_best_reply_numba
else:
    compositions = compositions_numpy
    first_best_reply = first_best_reply_numpy


def minkowski_unique(left: np.ndarray, right: np.ndarray, chunk: int = 1 << 21):
    """Distinct pairwise sums of rows, with the (left, right) row index of the
    first occurrence of each sum."""
    sums, li, ri = [], [], []
    step = max(1, chunk // max(1, len(right)))
    for start in range(0, len(left), step):
        block = left[start : start + step]
        s = (block[:, None, :] + right[None, :, :]).reshape(-1, left.shape[1])
        s, first = np.unique(s, axis=0, return_index=True)
        sums.append(s)
        li.append(start + first // len(right))
        ri.append(first % len(right))
    s = np.concatenate(sums)
    li = np.concatenate(li)
    ri = np.concatenate(ri)
    s, first = np.unique(s, axis=0, return_index=True)
    return s, li[first], ri[first]
