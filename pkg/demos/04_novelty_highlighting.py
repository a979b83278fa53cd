#!/usr/bin/env python3
# Novelty checking: find the maximal spans of a generated text that occur
# in the indexed corpora at or above a frequency threshold.
#
# A span is maximal when extending it one token left or right drops its
# total frequency below the threshold; overlapping spans are reported as-is.

from gramdex import build_fm_index, encode_corpus
from gramdex.stats import highlight_overlaps, total_count
from gramdex.textprep import TokenSequence, tokenize_query

training_docs = [
    "to be or not to be that is the question",
    "the slings and arrows of outrageous fortune",
    "all the world is a stage and all the men and women merely players",
]
indexes = {
    "plays": build_fm_index(encode_corpus(
        [TokenSequence(f"d{i}", t.split()) for i, t in enumerate(training_docs)]
    ), "plays"),
}

generated = "he wondered whether to be or not to be that is the real question of all the world"
tokens = tokenize_query(generated)

spans = highlight_overlaps(tokens, indexes, min_len=3, threshold=1)
print(f"generated text ({len(tokens)} tokens):")
print(" ", generated, "\n")
print("memorized spans (min length 3, frequency >= 1):")
for s in spans:
    phrase = " ".join(tokens[s.start : s.end])
    print(f"  [{s.start:>2}, {s.end:>2}) x{s.total_count}: {phrase!r}")

# render with brackets around highlighted regions
covered = set()
for s in spans:
    covered.update(range(s.start, s.end))
marked = " ".join(
    f"[{t}]" if i in covered else t for i, t in enumerate(tokens)
)
print("\ninline view:\n ", marked)

# spot-check maximality: extending any span kills the match
s = spans[0]
left = tokens[s.start - 1 : s.end] if s.start else None
if left:
    print("\nleft extension count:", total_count(left, indexes), "(below threshold)")
