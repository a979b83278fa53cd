"""Suffix array construction, BWT, and the rank structures underneath."""

import numpy as np
import pytest

from gramdex.csa import (
    BitVector,
    IndexBuildError,
    WaveletMatrix,
    build_suffix_array,
    bwt_from_sa,
)

from helpers import naive_suffix_array

# banana$ with $=0 < a=1 < b=2 < n=3
BANANA = np.array([2, 1, 3, 1, 3, 1, 0], dtype=np.int32)


class TestSuffixArray:
    def test_banana_fixture(self):
        # seven suffixes of banana$ sorted by hand
        assert build_suffix_array(BANANA).tolist() == [6, 5, 3, 1, 0, 4, 2]

    def test_terminator_only(self):
        assert build_suffix_array(np.array([0])).tolist() == [0]

    def test_aa_fixture(self):
        # "aa$": suffixes $, a$, aa$
        assert build_suffix_array(np.array([1, 1, 0])).tolist() == [2, 1, 0]

    def test_missing_terminator(self):
        with pytest.raises(IndexBuildError):
            build_suffix_array(np.array([2, 3]))

    def test_duplicated_terminator(self):
        with pytest.raises(IndexBuildError):
            build_suffix_array(np.array([2, 0, 3, 0]))

    def test_empty(self):
        with pytest.raises(IndexBuildError):
            build_suffix_array(np.array([], dtype=np.int32))

    def test_is_permutation(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(1, 400))
            sym = np.append(rng.integers(1, 8, size=n), 0).astype(np.int64)
            sa = build_suffix_array(sym)
            assert sorted(sa.tolist()) == list(range(n + 1))

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            n = int(rng.integers(1, 300))
            alphabet = int(rng.integers(2, 12))
            sym = np.append(rng.integers(1, alphabet + 1, size=n), 0).astype(np.int64)
            assert build_suffix_array(sym).tolist() == naive_suffix_array(sym)


class TestBwt:
    def test_banana_fixture(self):
        sa = build_suffix_array(BANANA)
        # annb$aa under the same symbol mapping
        assert bwt_from_sa(BANANA, sa).tolist() == [1, 3, 3, 2, 0, 1, 1]

    def test_terminator_only(self):
        sym = np.array([0])
        assert bwt_from_sa(sym, build_suffix_array(sym)).tolist() == [0]

    def test_aa_fixture(self):
        sym = np.array([1, 1, 0])
        assert bwt_from_sa(sym, build_suffix_array(sym)).tolist() == [1, 1, 0]

    def test_is_permutation_of_text(self):
        rng = np.random.default_rng(29)
        sym = np.append(rng.integers(1, 6, size=200), 0)
        bwt = bwt_from_sa(sym, build_suffix_array(sym))
        assert sorted(bwt.tolist()) == sorted(sym.tolist())


class TestBitVector:
    def test_rank_matches_cumsum(self):
        rng = np.random.default_rng(37)
        for n in (0, 1, 63, 64, 65, 1000, 4096):
            bits = rng.integers(0, 2, size=n).astype(np.uint8)
            bv = BitVector.from_bits(bits)
            prefix = np.concatenate([[0], np.cumsum(bits)])
            for i in range(0, n + 1, max(1, n // 97)):
                assert bv.rank1(i) == prefix[i]
                assert bv.rank0(i) == i - prefix[i]

    def test_get(self):
        bits = np.array([1, 0, 1, 1, 0, 0, 1], dtype=np.uint8)
        bv = BitVector.from_bits(bits)
        assert [bv.get(i) for i in range(7)] == bits.tolist()

    def test_counts(self):
        bv = BitVector.from_bits(np.array([1, 1, 0, 1]))
        assert bv.ones == 3 and bv.zeros == 1


class TestWaveletMatrix:
    def test_rank_matches_direct_count(self):
        rng = np.random.default_rng(41)
        for sigma in (2, 3, 5, 17, 40):
            seq = rng.integers(0, sigma, size=500).astype(np.int64)
            wm = WaveletMatrix.build(seq, sigma)
            for _ in range(100):
                c = int(rng.integers(0, sigma))
                i = int(rng.integers(0, len(seq) + 1))
                assert wm.rank(c, i) == int(np.count_nonzero(seq[:i] == c))

    def test_access_reconstructs_sequence(self):
        rng = np.random.default_rng(43)
        seq = rng.integers(0, 23, size=300).astype(np.int64)
        wm = WaveletMatrix.build(seq, 23)
        assert [wm.access(i) for i in range(len(seq))] == seq.tolist()

    def test_rank_of_absent_symbol(self):
        wm = WaveletMatrix.build(np.array([0, 1, 0, 1]), 5)
        assert wm.rank(3, 4) == 0

    def test_symbol_outside_alphabet_rejected_at_build(self):
        with pytest.raises(ValueError):
            WaveletMatrix.build(np.array([0, 9]), 5)
