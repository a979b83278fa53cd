#!/usr/bin/env python3
# Benchmark-overlap statistics: per-corpus count tables, k-gram hit ratios,
# and hit-length ratios, averaged across instances.
#
# The hit ratio at (k, t) is the fraction of an instance's k-token windows
# whose frequency, summed over every indexed corpus, is at least t.  The
# hit-length ratio buckets all substrings by length relative to the
# instance and asks the same question per bin.

from gramdex.stats import (
    ThresholdGrid, aggregate_benchmark, count_table, instance_overlap,
)
from gramdex.textprep import TokenSequence
from gramdex import build_fm_index, encode_corpus


def corpus_of(corpus_id, *texts):
    docs = [TokenSequence(f"{corpus_id}-{i}", t.split()) for i, t in enumerate(texts)]
    return build_fm_index(encode_corpus(docs), corpus_id)


indexes = {
    "web": corpus_of(
        "web",
        "plastic bags floating in the ocean are a common pollutant",
        "the ocean is warming and the ice is melting",
        "bags of rice floating down the river",
    ),
    "books": corpus_of(
        "books",
        "she stared at the ocean for hours thinking about the letter",
        "floating in the water he felt weightless",
    ),
}

# Count-table: every n-gram of a phrase with per-corpus counts.
query = "floating in the ocean".split()
print(f"{'n':>2} {'n-gram':32} {'web':>4} {'books':>6}")
for row in count_table(query, indexes):
    print(f"{row.n:>2} {' '.join(row.tokens):32} {row.counts['web']:>4} "
          f"{row.counts['books']:>6}")

# Per-instance overlap for a 3-instance benchmark, then the average.
grid = ThresholdGrid((1, 2, 5))
benchmark = [
    "plastic bags floating in the ocean",   # heavily covered
    "the ocean is warming",                 # partially covered
    "quantum entanglement of neutrinos",    # novel
]
instances = [
    instance_overlap(f"inst-{i}", text.split(), indexes, ks=(1, 2, 3), grid=grid)
    for i, text in enumerate(benchmark)
]
for inst in instances:
    print(f"\n{inst.instance_id} ({inst.length} tokens) hit ratios (t = 1, 2, 5):")
    for k, row in inst.hit_ratio().items():
        cells = "  n/a" if row is None else " ".join(f"{v:.2f}" for v in row)
        print(f"  k={k}: {cells}")

agg = aggregate_benchmark(instances)
print(f"\nbenchmark average over {agg.instance_count} instances, k=2:",
      [f"{v:.2f}" for v in agg.hit_ratio_mean[2]])
print("hit-length ratio means per bin (t=1):",
      [None if row is None else f"{row[0]:.2f}" for row in agg.hit_length_ratio_mean])
