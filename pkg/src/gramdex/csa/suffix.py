"""Suffix array construction and the Burrows-Wheeler transform.

Construction is prefix doubling over numpy sorts: O(n log n) worst case, and
in practice only a handful of rounds because ranks become distinct after
roughly log_sigma(n) doublings on natural token streams.
"""

from __future__ import annotations

import numpy as np


class IndexBuildError(ValueError):
    """The symbol sequence violates a build precondition."""


def _validate_terminated(symbols: np.ndarray) -> None:
    if len(symbols) == 0:
        raise IndexBuildError("symbol sequence is empty; expected at least the terminator")
    if symbols[-1] != 0:
        raise IndexBuildError("symbol sequence must end with the terminator symbol 0")
    zeros = int(np.count_nonzero(symbols == 0))
    if zeros != 1:
        raise IndexBuildError(f"terminator symbol 0 must occur exactly once, found {zeros}")
    if int(symbols.min()) < 0:
        raise IndexBuildError("symbols must be non-negative")


def build_suffix_array(symbols: np.ndarray) -> np.ndarray:
    """Permutation of positions sorting all suffixes lexicographically.

    Requires the unique smallest symbol (0) at the final position, which makes
    the suffix order strict.
    """
    symbols = np.asarray(symbols)
    _validate_terminated(symbols)
    n = len(symbols)
    rank = symbols.astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    if n == 1:
        return sa
    k = 1
    key2 = np.empty(n, dtype=np.int64)
    while True:
        key2[: n - k] = rank[k:]
        key2[n - k :] = -1
        order = np.lexsort((key2, rank))
        r1 = rank[order]
        r2 = key2[order]
        bumps = np.empty(n, dtype=np.int64)
        bumps[0] = 0
        bumps[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        ranks_sorted = np.cumsum(bumps)
        if ranks_sorted[-1] == n - 1:
            return order
        rank[order] = ranks_sorted
        k *= 2


def bwt_from_sa(symbols: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """BWT[i] = symbols[(sa[i] - 1) mod n]."""
    symbols = np.asarray(symbols)
    n = len(symbols)
    return symbols[(sa - 1) % n]
