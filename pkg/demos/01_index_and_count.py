#!/usr/bin/env python3
# Build a searchable index over a tiny corpus and count phrases of any length.
#
# The index is a count-only FM-index over integer token ids: a BWT with
# wavelet-matrix rank support plus a cumulative symbol table.  Counting a
# pattern walks it right-to-left, one rank-narrowing step per token, so a
# 7-token phrase costs exactly 7 steps no matter how large the corpus is.

from gramdex import TokenSequence, build_fm_index, encode_corpus
from gramdex.csa import deserialize, serialize
from gramdex.textprep import prepare_document, RawDocument

raw = [
    RawDocument("news-1", "The new library opened on Tuesday. The mayor spoke."),
    RawDocument("news-2", "The mayor spoke about the new library — again."),
    RawDocument("blog-9", "I visited the new library; it was quiet."),
]

# normalization maps typographic punctuation to ASCII and strips control
# characters; tokenization peels edge punctuation into standalone tokens
docs = [prepare_document(d) for d in raw]
print("tokens of news-2:", docs[1].tokens)

corpus = encode_corpus(docs)
print(f"{corpus.doc_count} docs, {corpus.token_count} tokens, "
      f"alphabet {corpus.vocabulary.sigma}")

index = build_fm_index(corpus, corpus_id="demo")

for phrase in ["the new library", "The mayor spoke", "library", "the moon"]:
    tokens = phrase.split()
    print(f"count({phrase!r:24}) = {index.count(tokens)}")

# occurrences never span document boundaries: "spoke I" would only match
# across news-2 / blog-9, so it counts zero
print("count('spoke I') =", index.count(["spoke", "I"]))

# the on-disk format round-trips exactly (magic, version, CRC64 trailer)
blob = serialize(index)
twin = deserialize(blob)
print(f"serialized {len(blob)} bytes; round-trip count:",
      twin.count(["the", "new", "library"]))
