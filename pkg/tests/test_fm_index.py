"""Corpus encoding and FM-index counting against the sliding-window oracle."""

import numpy as np
import pytest

from gramdex.csa import (
    FIRST_TOKEN_ID,
    build_fm_index,
    encode_corpus,
    naive_count,
)
from gramdex.textprep import TokenSequence

from helpers import NaiveCounter, index_of, random_pattern, random_token_docs


class TestEncodeCorpus:
    def test_two_docs(self):
        enc = encode_corpus([TokenSequence("d0", ["a", "b"]), TokenSequence("d1", ["b"])])
        assert enc.symbols.tolist() == [2, 3, 1, 3, 0]
        assert enc.vocabulary.get("a") == 2
        assert enc.vocabulary.get("b") == 3
        assert enc.doc_offsets == {"d0": 0, "d1": 3}

    def test_empty_corpus(self):
        enc = encode_corpus([])
        assert enc.symbols.tolist() == [0]
        assert enc.vocabulary.sigma == 2
        assert enc.token_count == 0

    def test_single_doc(self):
        enc = encode_corpus([TokenSequence("d0", ["x"])])
        assert enc.symbols.tolist() == [2, 0]

    def test_first_occurrence_ids(self):
        enc = encode_corpus([TokenSequence("d0", ["z", "a", "z", "m"])])
        assert enc.vocabulary.get("z") == 2
        assert enc.vocabulary.get("a") == 3
        assert enc.vocabulary.get("m") == 4

    def test_sentinels_never_inside_documents(self):
        enc = encode_corpus([TokenSequence(f"d{i}", ["w"] * 3) for i in range(4)])
        inner = enc.symbols[:-1]
        seps = np.flatnonzero(inner == 1)
        assert len(seps) == 3
        assert not np.any(inner[inner >= FIRST_TOKEN_ID] < FIRST_TOKEN_ID)

    def test_token_count(self):
        enc = encode_corpus([TokenSequence("d0", ["a", "b"]), TokenSequence("d1", ["c"])])
        assert enc.token_count == 3


class TestNaiveCount:
    def test_whole_doc_pattern(self):
        assert naive_count([["only"]], ["only"]) == 1

    def test_overlapping_windows(self):
        assert naive_count([["a", "a", "a"]], ["a", "a"]) == 2

    def test_pattern_longer_than_docs(self):
        assert naive_count([["a"], ["b", "c"]], ["a", "b", "c"]) == 0

    def test_empty_pattern_rejected(self):
        with pytest.raises(ValueError):
            naive_count([["a"]], [])


class TestFmCount:
    def test_banana_counts(self):
        idx = index_of([list("banana")])
        assert idx.count(list("ana")) == 2
        assert idx.count(list("nan")) == 1
        assert idx.count(["z"]) == 0
        assert idx.count(list("banana")) == 1
        assert idx.count(list("banan") + ["q"]) == 0

    def test_empty_pattern_rejected(self):
        idx = index_of([["a"]])
        with pytest.raises(ValueError):
            idx.count([])

    def test_no_match_across_document_boundary(self):
        # "b a" only occurs spanning the boundary between the two docs
        idx = index_of([["a", "b"], ["a", "b"]])
        assert idx.count(["b", "a"]) == 0
        assert idx.count(["a", "b"]) == 2

    def test_sum_rule(self):
        docs = [["x", "y", "x"], ["y", "z"]]
        idx = index_of(docs)
        total = sum(idx.count([t]) for t in ("x", "y", "z"))
        assert total == 5

    def test_extension_monotonicity(self):
        rng = np.random.default_rng(53)
        docs = random_token_docs(rng, 5, 400, 6)
        idx = index_of(docs)
        for _ in range(100):
            pat = random_pattern(rng, docs, 4)
            c = idx.count(pat)
            alphabet = [f"t{i}" for i in range(6)]
            ext = alphabet[int(rng.integers(0, 6))]
            assert idx.count(pat + [ext]) <= c
            assert idx.count([ext] + pat) <= c

    def test_matches_oracle_on_random_corpora(self):
        rng = np.random.default_rng(59)
        for _ in range(30):
            docs = random_token_docs(rng, int(rng.integers(1, 8)), int(rng.integers(10, 600)),
                                     int(rng.integers(2, 20)))
            idx = index_of(docs)
            oracle = NaiveCounter(docs)
            for _ in range(30):
                pat = random_pattern(rng, docs, 8)
                assert idx.count(pat) == oracle.count(pat)

    def test_step_contract(self):
        idx = index_of([["a", "b", "c", "a", "b"]])
        for pattern in (["a"], ["a", "b"], ["c", "a", "b"], ["a", "a", "a", "a"]):
            ids = [idx.vocabulary.get(t) for t in pattern]
            lo, hi, steps = idx.backward_range(ids)
            assert steps == len(pattern)

    def test_count_range_bounds(self):
        idx = index_of([["a", "b", "a"]])
        lo, hi, _ = idx.backward_range([idx.vocabulary.get("a")])
        assert 0 <= lo <= hi <= idx.length
        assert hi - lo == 2

    def test_reconstruction_roundtrip(self):
        rng = np.random.default_rng(61)
        for _ in range(10):
            docs = random_token_docs(rng, 3, 200, 9)
            seqs = [TokenSequence(f"d{i}", d) for i, d in enumerate(docs)]
            enc = encode_corpus(seqs)
            idx = build_fm_index(enc)
            assert idx.reconstruct_symbols().tolist() == enc.symbols.tolist()

    def test_c_table_invariants(self):
        idx = index_of([["q", "r", "q", "s"]])
        ct = idx.c_table
        assert ct[0] == 0
        assert all(ct[i] <= ct[i + 1] for i in range(len(ct) - 1))
        assert ct[-1] == idx.length

    def test_empty_corpus_index(self):
        idx = build_fm_index(encode_corpus([]))
        assert idx.length == 1
        assert idx.count(["anything"]) == 0

    def test_metadata(self):
        seqs = [TokenSequence("d0", ["a", "b"]), TokenSequence("d1", ["c"])]
        idx = build_fm_index(encode_corpus(seqs), corpus_id="meta-test")
        assert idx.meta.corpus_id == "meta-test"
        assert idx.meta.doc_count == 2
        assert idx.meta.token_count == 3
