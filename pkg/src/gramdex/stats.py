"""Overlap statistics between query text and the indexed corpus collection.

Computes per-instance k-gram hit ratios (fraction of an instance's k-token
windows whose summed corpus frequency meets each threshold), per-instance
hit-length ratios over relative-length bins, their averages across a
benchmark's instances, per-corpus n-gram count tables, and maximal
memorized-span highlighting for generated text.

Window counting is positional: repeated k-grams weigh by occurrence, so a
k value yields exactly |x| - k + 1 windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

DEFAULT_THRESHOLDS = (1, 10, 100, 1_000, 10_000, 100_000, 1_000_000)
DEFAULT_BINS = ((0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0))
DEFAULT_MAX_K = 10


class Counter(Protocol):
    """Anything that can count token patterns (FmIndex or a test oracle)."""

    def count(self, pattern: Sequence[str]) -> int: ...


@dataclass(frozen=True)
class ThresholdGrid:
    """Strictly ascending frequency thresholds."""

    thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS

    def __post_init__(self):
        if not self.thresholds:
            raise ValueError("at least one threshold required")
        if any(t < 1 for t in self.thresholds):
            raise ValueError("thresholds must be >= 1")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly ascending")

    def __len__(self) -> int:
        return len(self.thresholds)


@dataclass(frozen=True)
class LengthBins:
    """Contiguous relative-length bins covering (0, 1].

    Every bin is half-open [lo, hi) except the last, which is closed at 1.0.
    """

    bins: tuple[tuple[float, float], ...] = DEFAULT_BINS

    def __post_init__(self):
        if not self.bins:
            raise ValueError("at least one bin required")
        if self.bins[0][0] != 0.0 or self.bins[-1][1] != 1.0:
            raise ValueError("bins must start at 0.0 and end at 1.0")
        for (_, hi), (lo2, _) in zip(self.bins, self.bins[1:]):
            if hi != lo2:
                raise ValueError("bins must be contiguous")
        if any(hi <= lo for lo, hi in self.bins):
            raise ValueError("bins must be non-empty intervals")

    def bin_of(self, fraction: float) -> int:
        """Bin index for a relative length in (0, 1]."""
        last = len(self.bins) - 1
        for i, (lo, hi) in enumerate(self.bins):
            if lo <= fraction < hi or (i == last and fraction <= hi):
                return i
        raise ValueError(f"fraction {fraction} outside (0, 1]")

    def __len__(self) -> int:
        return len(self.bins)


@dataclass
class InstanceOverlap:
    """Hit tallies and ratios for one benchmark instance.

    Tallies are window counts: kgram_windows[k] is the number of k-token
    windows, kgram_hits[k][ti] how many meet threshold ti; bin_windows and
    bin_hits are the same per relative-length bin.  A k larger than the
    instance or an empty bin is not applicable and excluded from aggregation.
    """

    instance_id: str
    length: int
    ks: tuple[int, ...]
    grid: ThresholdGrid
    bins: LengthBins
    kgram_windows: dict[int, int]
    kgram_hits: dict[int, list[int]]
    bin_windows: list[int]
    bin_hits: list[list[int]]

    def hit_ratio(self) -> dict[int, list[float] | None]:
        out: dict[int, list[float] | None] = {}
        for k in self.ks:
            n = self.kgram_windows.get(k, 0)
            out[k] = None if n == 0 else [m / n for m in self.kgram_hits[k]]
        return out

    def hit_length_ratio(self) -> list[list[float] | None]:
        return [
            None if n == 0 else [m / n for m in hits]
            for n, hits in zip(self.bin_windows, self.bin_hits)
        ]


@dataclass
class BenchmarkOverlap:
    """Arithmetic means of instance ratios, skipping not-applicable cells."""

    ks: tuple[int, ...]
    grid: ThresholdGrid
    bins: LengthBins
    instance_count: int
    hit_ratio_mean: dict[int, list[float] | None]
    hit_ratio_support: dict[int, int]
    hit_length_ratio_mean: list[list[float] | None]
    hit_length_ratio_support: list[int]


@dataclass
class CountTableRow:
    """One n-gram of a query with its per-corpus counts."""

    n: int
    tokens: tuple[str, ...]
    counts: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class Span:
    """Maximal matched span [start, end) of a generated-token sequence."""

    start: int
    end: int
    total_count: int

    @property
    def length(self) -> int:
        return self.end - self.start


def extract_kgrams(tokens: Sequence[str], k: int) -> list[tuple[str, ...]]:
    """All contiguous k-token windows, positionally (duplicates retained)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(tokens):
        return []
    return [tuple(tokens[i : i + k]) for i in range(len(tokens) - k + 1)]


def total_count(pattern: Sequence[str], indexes: Mapping[str, Counter]) -> int:
    """Occurrences of the pattern summed over every indexed corpus."""
    if not indexes:
        raise ValueError("no indexes registered")
    return sum(idx.count(pattern) for idx in indexes.values())


def _threshold_tally(counts: Sequence[int], grid: ThresholdGrid) -> list[int]:
    return [sum(1 for c in counts if c >= t) for t in grid.thresholds]


def _index_window_counts(index, tokens: Sequence[str]) -> list[list[int]]:
    """counts[length-1][start] for every window, via backward left-extension.

    For each end position the pattern grows leftward one token at a time,
    reusing the previous search range, so all n*(n+1)/2 windows cost O(n^2)
    rank steps instead of O(n^3).  Once a range empties (or hits an
    out-of-vocabulary token), every further left extension stays zero.
    """
    n = len(tokens)
    ids = [index.vocabulary.get(t) for t in tokens]
    counts = [[0] * (n - length) for length in range(n)]
    for end in range(1, n + 1):
        lo, hi = 0, index.length
        for start in range(end - 1, -1, -1):
            sym = ids[start]
            if sym is None:
                break
            lo, hi = index.extend_left(lo, hi, sym)
            if hi == lo:
                break
            counts[end - start - 1][start] = hi - lo
    return counts


def _window_count_matrix(tokens: Sequence[str], indexes: Mapping[str, Counter]) -> list[list[int]]:
    """Total counts over all corpora for every window, by length then start."""
    if not indexes:
        raise ValueError("no indexes registered")
    n = len(tokens)
    totals = [[0] * (n - length) for length in range(n)]
    for idx in indexes.values():
        if hasattr(idx, "extend_left") and hasattr(idx, "vocabulary"):
            per_index = _index_window_counts(idx, tokens)
            for row, add in zip(totals, per_index):
                for i, c in enumerate(add):
                    row[i] += c
        else:
            for length in range(1, n + 1):
                row = totals[length - 1]
                for i in range(n - length + 1):
                    row[i] += idx.count(tokens[i : i + length])
    return totals


def kgram_hit_ratio(
    tokens: Sequence[str],
    k: int,
    grid: ThresholdGrid,
    indexes: Mapping[str, Counter],
) -> list[float] | None:
    """Per-threshold fraction of k-token windows meeting the threshold.

    None (not applicable) when k exceeds the instance length.
    """
    windows = extract_kgrams(tokens, k)
    if not windows:
        return None
    counts = [total_count(w, indexes) for w in windows]
    hits = _threshold_tally(counts, grid)
    return [h / len(windows) for h in hits]


def kgram_hit_length_ratio(
    tokens: Sequence[str],
    bins: LengthBins,
    grid: ThresholdGrid,
    indexes: Mapping[str, Counter],
) -> list[list[float] | None]:
    """Per-(bin, threshold) fraction of substrings meeting the threshold.

    A substring of length l belongs to the bin containing l/|x|.  Bins that
    receive no substrings yield None rows.
    """
    if not tokens:
        raise ValueError("instance must have at least one token")
    n = len(tokens)
    matrix = _window_count_matrix(tokens, indexes)
    bin_windows = [0] * len(bins)
    bin_hits = [[0] * len(grid) for _ in range(len(bins))]
    for length in range(1, n + 1):
        b = bins.bin_of(length / n)
        counts = matrix[length - 1]
        bin_windows[b] += len(counts)
        for ti, t in enumerate(grid.thresholds):
            bin_hits[b][ti] += sum(1 for c in counts if c >= t)
    return [
        None if nw == 0 else [h / nw for h in hits]
        for nw, hits in zip(bin_windows, bin_hits)
    ]


def instance_overlap(
    instance_id: str,
    tokens: Sequence[str],
    indexes: Mapping[str, Counter],
    ks: Sequence[int] | None = None,
    grid: ThresholdGrid | None = None,
    bins: LengthBins | None = None,
) -> InstanceOverlap:
    """Compute all tallies for one instance in a single pass over lengths."""
    if not tokens:
        raise ValueError("instance must have at least one token")
    grid = grid or ThresholdGrid()
    bins = bins or LengthBins()
    n = len(tokens)
    if ks is None:
        ks = tuple(range(1, min(n, DEFAULT_MAX_K) + 1))
    else:
        ks = tuple(ks)

    kgram_windows: dict[int, int] = {}
    kgram_hits: dict[int, list[int]] = {}
    bin_windows = [0] * len(bins)
    bin_hits = [[0] * len(grid) for _ in range(len(bins))]

    want_k = set(k for k in ks if 1 <= k <= n)
    matrix = _window_count_matrix(tokens, indexes)
    for length in range(1, n + 1):
        counts = matrix[length - 1]
        tally = _threshold_tally(counts, grid)
        b = bins.bin_of(length / n)
        bin_windows[b] += len(counts)
        for ti in range(len(grid)):
            bin_hits[b][ti] += tally[ti]
        if length in want_k:
            kgram_windows[length] = len(counts)
            kgram_hits[length] = tally
    return InstanceOverlap(
        instance_id=instance_id,
        length=n,
        ks=ks,
        grid=grid,
        bins=bins,
        kgram_windows=kgram_windows,
        kgram_hits=kgram_hits,
        bin_windows=bin_windows,
        bin_hits=bin_hits,
    )


def aggregate_benchmark(instances: Sequence[InstanceOverlap]) -> BenchmarkOverlap:
    """Average instance ratios cell-wise, skipping not-applicable cells."""
    if not instances:
        raise ValueError("at least one instance required")
    grid = instances[0].grid
    bins = instances[0].bins
    for inst in instances:
        if inst.grid != grid or inst.bins != bins:
            raise ValueError("instances were computed with different grids or bins")
    ks = tuple(sorted({k for inst in instances for k in inst.ks}))

    hit_mean: dict[int, list[float] | None] = {}
    hit_support: dict[int, int] = {}
    for k in ks:
        rows = [r for inst in instances if (r := inst.hit_ratio().get(k)) is not None]
        hit_support[k] = len(rows)
        hit_mean[k] = (
            None if not rows else [sum(col) / len(rows) for col in zip(*rows)]
        )

    length_mean: list[list[float] | None] = []
    length_support: list[int] = []
    for b in range(len(bins)):
        rows = [r for inst in instances if (r := inst.hit_length_ratio()[b]) is not None]
        length_support.append(len(rows))
        length_mean.append(
            None if not rows else [sum(col) / len(rows) for col in zip(*rows)]
        )
    return BenchmarkOverlap(
        ks=ks,
        grid=grid,
        bins=bins,
        instance_count=len(instances),
        hit_ratio_mean=hit_mean,
        hit_ratio_support=hit_support,
        hit_length_ratio_mean=length_mean,
        hit_length_ratio_support=length_support,
    )


def count_table(
    query_tokens: Sequence[str],
    indexes: Mapping[str, Counter],
    max_n: int | None = None,
) -> list[CountTableRow]:
    """Every positional n-gram of the query with per-corpus counts.

    Rows are ordered by n ascending, then window position.
    """
    if not query_tokens:
        raise ValueError("query must be non-empty")
    if not indexes:
        raise ValueError("no indexes registered")
    limit = len(query_tokens) if max_n is None else min(max_n, len(query_tokens))
    rows: list[CountTableRow] = []
    for n in range(1, limit + 1):
        for window in extract_kgrams(query_tokens, n):
            counts = {cid: idx.count(window) for cid, idx in indexes.items()}
            rows.append(CountTableRow(n=n, tokens=window, counts=counts))
    return rows


def highlight_overlaps(
    tokens: Sequence[str],
    indexes: Mapping[str, Counter],
    min_len: int = 1,
    threshold: int = 1,
) -> list[Span]:
    """Maximal spans whose total corpus frequency meets the threshold.

    A span is maximal when neither the one-token left extension nor the
    right extension still meets the threshold; reported spans may overlap.
    Scanning exploits that a substring never has a smaller count than any
    extension of it, so per end position the valid starts form a suffix.
    """
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    n = len(tokens)
    if n == 0:
        return []
    # a[j]: minimal start i such that tokens[i:j] meets the threshold (= j if none).
    a = [0] * (n + 1)
    span_count = [0] * (n + 1)
    prev = 0
    for j in range(1, n + 1):
        i = prev
        c = 0
        while i < j:
            c = total_count(tokens[i:j], indexes)
            if c >= threshold:
                break
            i += 1
        a[j] = i
        span_count[j] = c if i < j else 0
        prev = i
    spans: list[Span] = []
    for j in range(1, n + 1):
        i = a[j]
        if i >= j or j - i < min_len:
            continue
        right_extendable = j < n and a[j + 1] <= i
        if not right_extendable:
            spans.append(Span(start=i, end=j, total_count=span_count[j]))
    return spans
