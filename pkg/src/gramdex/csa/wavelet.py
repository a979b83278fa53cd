"""Wavelet matrix: balanced bitplane hierarchy for rank over large alphabets.

Each level stores one bit of every symbol (most significant first) as a
BitVector; the sequence is stably partitioned by that bit between levels.
rank and access walk the levels, costing O(log sigma) bitvector ranks.
"""

from __future__ import annotations

import numpy as np

from .bits import BitVector


class WaveletMatrix:
    __slots__ = ("length", "sigma", "depth", "levels", "zeros")

    def __init__(self, length: int, sigma: int, levels: list[BitVector], zeros: list[int]):
        self.length = length
        self.sigma = sigma
        self.depth = len(levels)
        self.levels = levels
        self.zeros = zeros

    @classmethod
    def build(cls, seq: np.ndarray, sigma: int) -> "WaveletMatrix":
        seq = np.asarray(seq, dtype=np.int64)
        if len(seq) and int(seq.max()) >= max(sigma, 1):
            raise ValueError("sequence contains symbols outside the alphabet")
        depth = max(1, (sigma - 1).bit_length())
        levels: list[BitVector] = []
        zeros: list[int] = []
        cur = seq
        for level in range(depth):
            bit = (cur >> (depth - 1 - level)) & 1
            bv = BitVector.from_bits(bit)
            levels.append(bv)
            zeros.append(bv.zeros)
            if level < depth - 1:
                mask = bit == 1
                cur = np.concatenate((cur[~mask], cur[mask]))
        return cls(len(seq), sigma, levels, zeros)

    def rank(self, symbol: int, i: int) -> int:
        """Occurrences of symbol in positions [0, i)."""
        if symbol < 0 or symbol >= (1 << self.depth):
            return 0
        start = 0
        end = i
        shift = self.depth - 1
        for level in range(self.depth):
            bv = self.levels[level]
            if (symbol >> (shift - level)) & 1:
                z = self.zeros[level]
                start = z + bv.rank1(start)
                end = z + bv.rank1(end)
            else:
                start = bv.rank0(start)
                end = bv.rank0(end)
        return end - start

    def access(self, i: int) -> int:
        """Symbol at position i."""
        symbol = 0
        for level in range(self.depth):
            bv = self.levels[level]
            bit = bv.get(i)
            symbol = (symbol << 1) | bit
            if bit:
                i = self.zeros[level] + bv.rank1(i)
            else:
                i = bv.rank0(i)
        return symbol

    def __len__(self) -> int:
        return self.length
