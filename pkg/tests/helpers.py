"""Shared test oracles and fixture builders.

The oracles here are independent of the code paths they check: suffix order
by full-suffix comparison, pattern counts by sliding windows, Jaccard by set
arithmetic.
"""

from __future__ import annotations

import numpy as np

from gramdex.csa import FmIndex, build_fm_index, encode_corpus
from gramdex.textprep import TokenSequence


def naive_suffix_array(symbols) -> list[int]:
    """Sort suffix start positions by comparing the full suffixes."""
    symbols = list(symbols)
    return sorted(range(len(symbols)), key=lambda i: symbols[i:])


class NaiveCounter:
    """Counts patterns by scanning documents; stand-in for an FmIndex."""

    def __init__(self, docs: list[list[str]]):
        self.docs = docs

    def count(self, pattern) -> int:
        if not pattern:
            raise ValueError("pattern must be non-empty")
        pat = list(pattern)
        m = len(pat)
        return sum(
            1
            for doc in self.docs
            for i in range(len(doc) - m + 1)
            if doc[i : i + m] == pat
        )


def random_token_docs(
    rng: np.random.Generator,
    n_docs: int,
    total_tokens: int,
    alphabet: int,
) -> list[list[str]]:
    """Random documents over a small token alphabet, ~total_tokens combined."""
    vocab = [f"t{i}" for i in range(alphabet)]
    docs: list[list[str]] = []
    remaining = total_tokens
    for d in range(n_docs):
        size = remaining if d == n_docs - 1 else max(1, int(rng.integers(1, 2 * total_tokens // n_docs)))
        size = min(size, remaining)
        if size <= 0:
            break
        docs.append([vocab[i] for i in rng.integers(0, alphabet, size=size)])
        remaining -= size
    return [d for d in docs if d]


def index_of(docs: list[list[str]], corpus_id: str = "test") -> FmIndex:
    seqs = [TokenSequence(f"d{i:04d}", doc) for i, doc in enumerate(docs)]
    return build_fm_index(encode_corpus(seqs), corpus_id)


def random_pattern(rng: np.random.Generator, docs: list[list[str]], max_len: int) -> list[str]:
    """Half the time a window that exists, half the time random tokens."""
    length = int(rng.integers(1, max_len + 1))
    if rng.random() < 0.5:
        candidates = [d for d in docs if len(d) >= length]
        if candidates:
            doc = candidates[int(rng.integers(0, len(candidates)))]
            start = int(rng.integers(0, len(doc) - length + 1))
            return doc[start : start + length]
    alphabet = sorted({t for d in docs for t in d}) or ["t0"]
    return [alphabet[int(rng.integers(0, len(alphabet)))] for _ in range(length)]


def shingle_pair_with_jaccard(
    rng: np.random.Generator, common: int, only_a: int, only_b: int
) -> tuple[frozenset[str], frozenset[str]]:
    """Two token sets with exact Jaccard common / (common + only_a + only_b)."""
    base = int(rng.integers(0, 1_000_000)) * 1000
    shared = {f"s{base + i}" for i in range(common)}
    a = frozenset(shared | {f"a{base + i}" for i in range(only_a)})
    b = frozenset(shared | {f"b{base + i}" for i in range(only_b)})
    return a, b
