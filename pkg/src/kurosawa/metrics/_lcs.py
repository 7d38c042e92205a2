"""Longest-common-subsequence length kernel.

This is the one hot numeric loop in the workbench (quadratic in document
length, called per candidate/reference pair), so it ships two
implementations: a numba-jitted scalar DP and a row-vectorized numpy
fallback.  Set ``KUROSAWA_NO_NUMBA=1`` to force the numpy path;
``benchmarks/bench_lcs.py`` compares the two.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np


def _lcs_len_numpy(a: np.ndarray, b: np.ndarray) -> int:
    # Row recurrence: curr[j] = max(prev[j], max over matches k<=j of prev[k-1]+1).
    # The inner prefix-max removes the within-row dependency, so each row vectorizes.
    n = b.shape[0]
    prev = np.zeros(n + 1, dtype=np.int64)
    curr = np.empty(n + 1, dtype=np.int64)
    curr[0] = 0
    for i in range(a.shape[0]):
        cand = np.where(b == a[i], prev[:n] + 1, 0)
        np.maximum.accumulate(cand, out=cand)
        np.maximum(prev[1:], cand, out=curr[1:])
        prev, curr = curr, prev
        curr[0] = 0
    return int(prev[n])


if os.environ.get("KUROSAWA_NO_NUMBA", "").strip() not in ("", "0"):
    HAS_NUMBA = False
else:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:

    @njit(cache=True)
    def _lcs_len_jit(a: np.ndarray, b: np.ndarray) -> int:  # pragma: no cover - numba
        n = b.shape[0]
        prev = np.zeros(n + 1, dtype=np.int64)
        curr = np.zeros(n + 1, dtype=np.int64)
        for i in range(a.shape[0]):
            ai = a[i]
            for j in range(1, n + 1):
                if b[j - 1] == ai:
                    curr[j] = prev[j - 1] + 1
                elif prev[j] >= curr[j - 1]:
                    curr[j] = prev[j]
                else:
                    curr[j] = curr[j - 1]
            prev, curr = curr, prev
        return prev[n]

    _lcs_len_ids = _lcs_len_jit
    LCS_BACKEND = "numba"
else:
    _lcs_len_ids = _lcs_len_numpy
    LCS_BACKEND = "numpy"


def encode_pair(a: Sequence[str], b: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """Map two token sequences onto a shared integer vocabulary."""
    ids: dict[str, int] = {}
    def enc(seq: Sequence[str]) -> np.ndarray:
        out = np.empty(len(seq), dtype=np.int64)
        for i, tok in enumerate(seq):
            out[i] = ids.setdefault(tok, len(ids))
        return out
    return enc(a), enc(b)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    ea, eb = encode_pair(a, b)
    return int(_lcs_len_ids(ea, eb))
