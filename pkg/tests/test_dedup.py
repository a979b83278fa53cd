"""MinHash, LSH banding, and the batch/merge deduplication pipeline."""

import numpy as np
import pytest

from gramdex.dedup import (
    LshConfig,
    ShingleSet,
    SignatureMismatchError,
    deduplicate,
    deduplicate_batch,
    estimate_jaccard,
    exact_jaccard,
    lsh_candidates,
    merge_deduplicated,
    minhash_signature,
    shingle,
)
from gramdex.textprep import TokenSequence

from helpers import shingle_pair_with_jaccard


def sig(tokens, seed=3, doc_id="x", num_perm=100):
    return minhash_signature(ShingleSet(doc_id, frozenset(tokens)), seed, num_perm)


class TestShingle:
    def test_dedups_tokens(self):
        assert shingle(TokenSequence("d", ["a", "b", "a"])).shingles == {"a", "b"}

    def test_empty(self):
        assert shingle(TokenSequence("d", [])).shingles == frozenset()

    def test_plain(self):
        assert shingle(TokenSequence("d", ["the", "cat", "sat"])).shingles == {"the", "cat", "sat"}


class TestExactJaccard:
    def test_identical_singletons(self):
        assert exact_jaccard({"x"}, {"x"}) == 1.0

    def test_disjoint_singletons(self):
        assert exact_jaccard({"x"}, {"y"}) == 0.0

    def test_half(self):
        assert exact_jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5

    def test_two_empty_sets_are_identical(self):
        assert exact_jaccard(frozenset(), frozenset()) == 1.0


class TestMinHash:
    def test_signature_length_is_100(self):
        assert sig(["a", "b"]).num_permutations == 100

    def test_deterministic(self):
        a = sig(["a", "b", "c"], seed=9)
        b = sig(["a", "b", "c"], seed=9)
        assert np.array_equal(a.values, b.values)

    def test_identical_sets_estimate_one(self):
        assert estimate_jaccard(sig(["p", "q"]), sig(["p", "q"])) == 1.0

    def test_symmetric(self):
        a, b = sig(["a", "b", "c"]), sig(["b", "c", "d"])
        assert estimate_jaccard(a, b) == estimate_jaccard(b, a)

    def test_disjoint_large_sets_estimate_near_zero(self):
        a = sig([f"a{i}" for i in range(500)])
        b = sig([f"b{i}" for i in range(500)])
        assert estimate_jaccard(a, b) <= 0.05

    def test_seed_mismatch_is_error(self):
        with pytest.raises(SignatureMismatchError):
            estimate_jaccard(sig(["a"], seed=1), sig(["a"], seed=2))

    def test_length_mismatch_is_error(self):
        with pytest.raises(SignatureMismatchError):
            estimate_jaccard(sig(["a"], num_perm=100), sig(["a"], num_perm=50))

    def test_empty_set_sentinel(self):
        empty = sig([])
        assert empty.empty
        assert np.all(empty.values == np.uint64(0xFFFFFFFFFFFFFFFF))
        assert estimate_jaccard(empty, sig(["a"])) == 0.0
        assert estimate_jaccard(empty, sig([])) == 1.0

    def test_estimate_tracks_exact(self):
        # Known-Jaccard pairs; binomial(100, J) noise stays within 0.15
        # with overwhelming probability per pair.
        rng = np.random.default_rng(17)
        bad = 0
        for _ in range(200):
            common = int(rng.integers(5, 80))
            extra = int(rng.integers(0, 40))
            a, b = shingle_pair_with_jaccard(rng, common, extra, extra)
            exact = exact_jaccard(a, b)
            est = estimate_jaccard(
                minhash_signature(ShingleSet("a", a), 5),
                minhash_signature(ShingleSet("b", b), 5),
            )
            if abs(est - exact) > 0.15:
                bad += 1
        assert bad <= 2


class TestLshCandidates:
    CFG = LshConfig(bands=50, rows_per_band=2, jaccard_threshold=0.95)

    def test_identical_signatures_always_pair(self):
        sigs = [sig(["a", "b", "c"], doc_id="d1"), sig(["a", "b", "c"], doc_id="d2")]
        assert lsh_candidates(sigs, self.CFG) == {("d1", "d2")}

    def test_fully_different_signatures_do_not_pair(self):
        sigs = [
            sig([f"a{i}" for i in range(300)], doc_id="d1"),
            sig([f"b{i}" for i in range(300)], doc_id="d2"),
        ]
        pairs = lsh_candidates(sigs, self.CFG)
        assert pairs == set()

    def test_banding_config_mismatch(self):
        with pytest.raises(SignatureMismatchError):
            lsh_candidates([sig(["a"], num_perm=50)], self.CFG)

    def test_mixed_seeds_rejected(self):
        with pytest.raises(SignatureMismatchError):
            lsh_candidates([sig(["a"], seed=1, doc_id="x"), sig(["a"], seed=2, doc_id="y")], self.CFG)

    def test_high_jaccard_recall(self):
        # Banding catch probability 1-(1-J^2)^50 is ~1 for J >= 0.95.
        rng = np.random.default_rng(23)
        caught = total = 0
        for i in range(100):
            a, b = shingle_pair_with_jaccard(rng, 97, 2, 1)  # J = 97/100
            sa = minhash_signature(ShingleSet(f"a{i}", a), 11)
            sb = minhash_signature(ShingleSet(f"b{i}", b), 11)
            total += 1
            if lsh_candidates([sa, sb], self.CFG):
                caught += 1
        assert caught / total >= 0.95


def docs_from_sets(sets: dict[str, list[str]]) -> list[TokenSequence]:
    return [TokenSequence(doc_id, tokens) for doc_id, tokens in sorted(sets.items())]


class TestDeduplicateBatch:
    CFG = LshConfig()

    def test_identical_pair_removes_second(self):
        docs = docs_from_sets({"a": ["x", "y", "z"], "b": ["x", "y", "z"]})
        batch = deduplicate_batch(docs, self.CFG, seed=1)
        assert batch.result.retained == ["a"]
        (rec,) = batch.result.removals
        assert (rec.removed_id, rec.kept_id, rec.exact_jaccard) == ("b", "a", 1.0)

    def test_jaccard_090_pair_survives(self):
        # |intersection| / |union| = 9/10, below the 0.95 threshold.
        nine = [f"w{i}" for i in range(9)]
        docs = docs_from_sets({"a": nine, "b": nine + ["w9"]})
        assert exact_jaccard(frozenset(nine), frozenset(nine + ["w9"])) == 0.9
        batch = deduplicate_batch(docs, self.CFG, seed=1)
        assert batch.result.retained == ["a", "b"]

    def test_empty_input(self):
        batch = deduplicate_batch([], self.CFG, seed=1)
        assert batch.result.retained == []
        assert batch.result.removals == []

    def test_partition_invariant(self):
        # retained + removal sources = input set; no overlap
        docs = docs_from_sets({
            "a": ["x", "y", "z"],
            "b": ["x", "y", "z"],
            "c": ["p", "q"],
            "d": ["p", "q"],
            "e": ["solo"],
        })
        batch = deduplicate_batch(docs, self.CFG, seed=2)
        retained = set(batch.result.retained)
        removed = {r.removed_id for r in batch.result.removals}
        assert retained | removed == {"a", "b", "c", "d", "e"}
        assert retained & removed == set()

    def test_no_retained_candidate_pair_meets_threshold(self):
        # after a pass, any two retained docs that were LSH candidates must
        # sit below the removal threshold
        rng = np.random.default_rng(101)
        base = [f"w{i}" for i in range(30)]
        docs = []
        for i in range(40):
            toks = [t for t in base if rng.random() > 0.05] or ["w0"]
            docs.append(TokenSequence(f"d{i:02d}", toks))
        batch = deduplicate_batch(docs, self.CFG, seed=4)
        retained = set(batch.result.retained)
        pairs = lsh_candidates(list(batch.signatures.values()), self.CFG)
        for a, b in pairs:
            if a in retained and b in retained:
                assert exact_jaccard(batch.shingles[a], batch.shingles[b]) < 0.95

    def test_threads_do_not_change_the_outcome(self):
        rng = np.random.default_rng(131)
        vocab = [f"v{i}" for i in range(100)]
        docs = [TokenSequence(f"d{i:03d}", [vocab[j] for j in rng.integers(0, 100, 15)])
                for i in range(60)]
        one = deduplicate_batch(docs, self.CFG, seed=2, threads=1)
        four = deduplicate_batch(docs, self.CFG, seed=2, threads=4)
        assert one.result.retained == four.result.retained
        assert [(r.removed_id, r.kept_id) for r in one.result.removals] == [
            (r.removed_id, r.kept_id) for r in four.result.removals
        ]

    def test_removal_soundness(self):
        rng = np.random.default_rng(31)
        base = [f"w{i}" for i in range(40)]
        sets = {}
        for i in range(30):
            drop = rng.integers(0, 3)
            toks = [t for t in base if rng.random() > 0.02 * drop]
            sets[f"d{i:02d}"] = toks or ["w0"]
        docs = docs_from_sets(sets)
        batch = deduplicate_batch(docs, self.CFG, seed=3)
        shingles = {d.doc_id: frozenset(d.tokens) for d in docs}
        for rec in batch.result.removals:
            assert rec.kept_id in batch.result.retained
            assert exact_jaccard(shingles[rec.removed_id], shingles[rec.kept_id]) >= 0.95
            assert rec.exact_jaccard >= 0.95


class TestMerge:
    CFG = LshConfig()

    def test_no_cross_duplicates_is_union(self):
        a = deduplicate_batch(docs_from_sets({"a": ["1", "2"], "b": ["3", "4"]}), self.CFG, 1)
        b = deduplicate_batch(docs_from_sets({"c": ["5", "6"], "d": ["7", "8"]}), self.CFG, 1)
        merged = merge_deduplicated(a, b)
        assert merged.result.retained == ["a", "b", "c", "d"]

    def test_cross_duplicate_removed(self):
        a = deduplicate_batch(docs_from_sets({"a": ["x", "y", "z"]}), self.CFG, 1)
        b = deduplicate_batch(docs_from_sets({"d": ["x", "y", "z"]}), self.CFG, 1)
        merged = merge_deduplicated(a, b)
        assert merged.result.retained == ["a"]
        assert merged.result.removals[0].removed_id == "d"

    def test_seed_mismatch(self):
        a = deduplicate_batch(docs_from_sets({"a": ["x"]}), self.CFG, 1)
        b = deduplicate_batch(docs_from_sets({"b": ["x"]}), self.CFG, 2)
        with pytest.raises(SignatureMismatchError):
            merge_deduplicated(a, b)

    def test_batched_equals_single_pass_on_random_docs(self):
        rng = np.random.default_rng(47)
        vocab = [f"v{i}" for i in range(200)]
        docs = []
        for i in range(200):
            size = int(rng.integers(5, 30))
            docs.append(TokenSequence(f"d{i:03d}", [vocab[j] for j in rng.integers(0, 200, size)]))
        single = deduplicate_batch(docs, self.CFG, seed=9)
        batched = deduplicate(docs, self.CFG, seed=9, batch_size=50)
        assert batched.result.retained == single.result.retained
