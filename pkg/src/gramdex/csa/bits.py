"""Packed bitvector with block-accelerated rank."""

from __future__ import annotations

import numpy as np


class BitVector:
    """Immutable bit sequence answering rank in O(1).

    Bits are packed little-endian into 64-bit words; an exclusive prefix sum
    of per-word popcounts gives rank with one table lookup plus one popcount.
    Supports up to 2**32 - 1 set bits (uint32 prefix blocks).
    """

    __slots__ = ("n", "words", "_cum")

    def __init__(self, n: int, words: np.ndarray):
        self.n = n
        self.words = words
        self._cum = self._prefix_counts(words)

    @staticmethod
    def _prefix_counts(words: np.ndarray) -> np.ndarray:
        bytes_view = words.view(np.uint8).reshape(len(words), 8)
        per_word = np.unpackbits(bytes_view, axis=1).sum(axis=1, dtype=np.uint32)
        cum = np.zeros(len(words) + 1, dtype=np.uint32)
        np.cumsum(per_word, out=cum[1:])
        return cum

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "BitVector":
        """Pack a 0/1 (or bool) array."""
        bits = np.asarray(bits, dtype=np.uint8)
        n = len(bits)
        n_words = (n + 63) // 64
        padded = np.zeros(n_words * 64, dtype=np.uint8)
        padded[:n] = bits
        packed = np.packbits(padded, bitorder="little")
        return cls(n, packed.view(np.uint64))

    def get(self, i: int) -> int:
        return (int(self.words[i >> 6]) >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of set bits in positions [0, i)."""
        w = i >> 6
        r = i & 63
        count = int(self._cum[w])
        if r:
            count += (int(self.words[w]) & ((1 << r) - 1)).bit_count()
        return count

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    @property
    def ones(self) -> int:
        return int(self._cum[-1])

    @property
    def zeros(self) -> int:
        return self.n - self.ones
