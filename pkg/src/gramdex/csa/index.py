"""Count-only FM-index over an integer-encoded token corpus.

The index keeps the BWT (as a wavelet matrix), the cumulative symbol table,
and the vocabulary; the suffix array itself is discarded after the build.
Counting a pattern of m tokens performs exactly m backward-search steps,
each two rank queries plus two cumulative-table lookups.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..textprep import TokenSequence
from .encode import EncodedCorpus
from .suffix import build_suffix_array, bwt_from_sa
from .vocab import TERMINATOR, Vocabulary
from .wavelet import WaveletMatrix


@dataclass
class IndexMetadata:
    corpus_id: str
    doc_count: int
    token_count: int
    built_at: str
    format_version: int = 1


class FmIndex:
    """Immutable searchable index for one corpus; safe for concurrent readers."""

    __slots__ = ("wm", "c_table", "vocabulary", "meta", "length")

    def __init__(
        self,
        wm: WaveletMatrix,
        c_table: np.ndarray,
        vocabulary: Vocabulary,
        meta: IndexMetadata,
    ):
        self.wm = wm
        self.c_table = c_table
        self.vocabulary = vocabulary
        self.meta = meta
        self.length = wm.length

    def backward_range(self, symbol_ids: Sequence[int]) -> tuple[int, int, int]:
        """Run backward search; returns (lo, hi, steps).

        The half-open suffix-order interval [lo, hi) spans all suffixes
        prefixed by the pattern, so hi - lo is the occurrence count.  One
        range-update step is executed per pattern symbol, with no early exit.
        """
        if not symbol_ids:
            raise ValueError("pattern must be non-empty")
        lo, hi = 0, self.length
        steps = 0
        c_table = self.c_table
        rank = self.wm.rank
        for sym in reversed(symbol_ids):
            base = int(c_table[sym])
            lo = base + rank(sym, lo)
            hi = base + rank(sym, hi)
            steps += 1
        return lo, hi, steps

    def count_ids(self, symbol_ids: Sequence[int]) -> int:
        lo, hi, _ = self.backward_range(symbol_ids)
        return hi - lo

    def count(self, pattern: Sequence[str]) -> int:
        """Occurrences of the token pattern; 0 if any token is out of vocabulary."""
        if not pattern:
            raise ValueError("pattern must be non-empty")
        ids = []
        get = self.vocabulary.get
        for token in pattern:
            sym = get(token)
            if sym is None:
                return 0
            ids.append(sym)
        return self.count_ids(ids)

    def extend_left(self, lo: int, hi: int, symbol: int) -> tuple[int, int]:
        """One backward-search step: prepend a symbol to the matched pattern."""
        base = int(self.c_table[symbol])
        return base + self.wm.rank(symbol, lo), base + self.wm.rank(symbol, hi)

    def bwt_symbol(self, i: int) -> int:
        return self.wm.access(i)

    def reconstruct_symbols(self) -> np.ndarray:
        """Invert the BWT via LF-mapping; returns the encoded corpus sequence."""
        n = self.length
        out = np.empty(n, dtype=np.int32)
        out[n - 1] = TERMINATOR
        row = 0  # row 0 holds the terminator suffix, i.e. text position n-1
        for pos in range(n - 2, -1, -1):
            sym = self.wm.access(row)
            out[pos] = sym
            row = int(self.c_table[sym]) + self.wm.rank(sym, row)
        return out

    @property
    def sigma(self) -> int:
        return self.vocabulary.sigma


def build_fm_index(corpus: EncodedCorpus, corpus_id: str = "") -> FmIndex:
    """Build the count-only index; the suffix array is not retained."""
    sa = build_suffix_array(corpus.symbols)
    bwt = bwt_from_sa(corpus.symbols, sa)
    sigma = corpus.vocabulary.sigma
    wm = WaveletMatrix.build(bwt, sigma)
    counts = np.bincount(corpus.symbols, minlength=sigma).astype(np.int64)
    c_table = np.zeros(sigma + 1, dtype=np.int64)
    np.cumsum(counts, out=c_table[1:])
    meta = IndexMetadata(
        corpus_id=corpus_id,
        doc_count=corpus.doc_count,
        token_count=corpus.token_count,
        built_at=datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    )
    return FmIndex(wm=wm, c_table=c_table, vocabulary=corpus.vocabulary, meta=meta)


def naive_count(docs: Iterable[TokenSequence | Sequence[str]], pattern: Sequence[str]) -> int:
    """Sliding-window exact-match count over documents (test oracle)."""
    if not pattern:
        raise ValueError("pattern must be non-empty")
    pat = list(pattern)
    m = len(pat)
    total = 0
    for doc in docs:
        tokens = doc.tokens if isinstance(doc, TokenSequence) else doc
        for i in range(len(tokens) - m + 1):
            if list(tokens[i : i + m]) == pat:
                total += 1
    return total
