#!/usr/bin/env python3
# Near-duplicate removal with MinHash signatures and LSH banding.
#
# Each document becomes its set of distinct tokens (unigram shingling),
# hashed into 100 per-permutation minima.  LSH banding (50 bands x 2 rows)
# proposes candidate pairs, which are verified with exact Jaccard before
# anything is removed; the earliest-ingested copy of a cluster survives.

import numpy as np

from gramdex.dedup import (
    LshConfig, ShingleSet, deduplicate, estimate_jaccard, exact_jaccard,
    minhash_signature, shingle,
)
from gramdex.textprep import TokenSequence

base = ("the quick brown fox jumps over the lazy dog while carrying "
        "a heavy parcel across the frozen river at dawn").split()

docs = [
    TokenSequence("doc-00", base),
    TokenSequence("doc-01", base),                       # exact copy: removed
    TokenSequence("doc-02", base[:-2] + ["at", "dusk"]), # J ~ 0.89: survives the 0.95 bar
    TokenSequence("doc-03", base[:10] + "entirely different second half of text here now".split()),
    TokenSequence("doc-04", "completely unrelated content about compressed indexes".split()),
]

# how similar are they, exactly and by estimate?
sig = {d.doc_id: minhash_signature(shingle(d), seed=42) for d in docs}
for other in docs[1:]:
    exact = exact_jaccard(shingle(docs[0]).shingles, shingle(other).shingles)
    est = estimate_jaccard(sig["doc-00"], sig[other.doc_id])
    print(f"doc-00 vs {other.doc_id}: exact J = {exact:.3f}, minhash estimate = {est:.2f}")

batch = deduplicate(docs, LshConfig(jaccard_threshold=0.95), seed=42)
print("\nretained:", batch.result.retained)
for rec in batch.result.removals:
    print(f"removed {rec.removed_id} (duplicate of {rec.kept_id}, "
          f"J = {rec.exact_jaccard:.3f})")

# batch-and-merge gives the same survivors as one pass: split 200 random
# docs into 4 batches and compare
rng = np.random.default_rng(1)
vocab = [f"w{i}" for i in range(300)]
big = [TokenSequence(f"r{i:03d}", [vocab[j] for j in rng.integers(0, 300, 20)])
       for i in range(200)]
single = deduplicate(big, seed=7)
merged = deduplicate(big, seed=7, batch_size=50)
print("\nbatched merge == single pass:",
      merged.result.retained == single.result.retained)
