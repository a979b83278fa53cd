"""Near-duplicate document removal with MinHash signatures and LSH banding.

Documents are shingled into sets of unigram tokens, hashed into fixed-length
MinHash signatures, bucketed by LSH bands to propose candidate pairs, and
candidates are verified with exact Jaccard similarity before removal.  Large
corpora are handled by deduplicating batches independently and merging the
deduplicated batches pairwise.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .textprep import TokenSequence

DEFAULT_NUM_PERMUTATIONS = 100
DEFAULT_JACCARD_THRESHOLD = 0.95
DEFAULT_BANDS = 50

_U64_MAX = np.uint64(0xFFFFFFFFFFFFFFFF)
_SENTINEL = 0xFFFFFFFFFFFFFFFF


class SignatureMismatchError(ValueError):
    """Signatures built with different seeds or lengths are not comparable."""


@dataclass
class ShingleSet:
    """The distinct unigram tokens of one document."""

    doc_id: str
    shingles: frozenset[str]


@dataclass
class MinHashSignature:
    """Per-permutation hash minima over a document's shingles.

    An empty document gets the all-max sentinel signature and is flagged so it
    never matches a non-empty document.
    """

    doc_id: str
    values: np.ndarray  # uint64, one minimum per permutation
    permutation_seed: int
    empty: bool = False

    @property
    def num_permutations(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LshConfig:
    """Banding layout and the removal threshold."""

    bands: int = DEFAULT_BANDS
    rows_per_band: int = DEFAULT_NUM_PERMUTATIONS // DEFAULT_BANDS
    jaccard_threshold: float = DEFAULT_JACCARD_THRESHOLD

    def __post_init__(self) -> None:
        if self.bands < 1 or self.rows_per_band < 1:
            raise ValueError("bands and rows_per_band must be positive")
        if not 0.0 < self.jaccard_threshold <= 1.0:
            raise ValueError("jaccard_threshold must be in (0, 1]")

    @property
    def num_permutations(self) -> int:
        return self.bands * self.rows_per_band


@dataclass
class RemovalRecord:
    """One removed document and the retained document it duplicates."""

    removed_id: str
    kept_id: str
    exact_jaccard: float


@dataclass
class DedupResult:
    """Outcome ledger of a deduplication pass."""

    retained: list[str]
    removals: list[RemovalRecord]
    input_count: int

    @property
    def removed_count(self) -> int:
        return len(self.removals)

    @property
    def retained_count(self) -> int:
        return len(self.retained)


@dataclass
class DedupBatch:
    """A deduplicated batch plus the per-document state merging needs."""

    result: DedupResult
    cfg: LshConfig
    seed: int
    signatures: dict[str, MinHashSignature] = field(default_factory=dict)
    shingles: dict[str, frozenset[str]] = field(default_factory=dict)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 finalizer; wraps mod 2**64."""
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _token_digests(tokens: Iterable[str]) -> np.ndarray:
    """Stable 64-bit digest per token (platform independent)."""
    digests = [
        int.from_bytes(hashlib.blake2b(t.encode("utf-8"), digest_size=8).digest(), "little")
        for t in tokens
    ]
    return np.asarray(digests, dtype=np.uint64)


def _permutation_keys(seed: int, num_permutations: int) -> np.ndarray:
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    idx = np.arange(1, num_permutations + 1, dtype=np.uint64)
    return _splitmix64(base ^ (idx * np.uint64(0x9E3779B97F4A7C15)))


def shingle(doc: TokenSequence) -> ShingleSet:
    """Represent a document as its set of distinct tokens."""
    return ShingleSet(doc_id=doc.doc_id, shingles=frozenset(doc.tokens))


def minhash_signature(
    s: ShingleSet, seed: int, num_permutations: int = DEFAULT_NUM_PERMUTATIONS
) -> MinHashSignature:
    """Per-permutation minima of seeded 64-bit hashes over the shingles."""
    if not s.shingles:
        values = np.full(num_permutations, _SENTINEL, dtype=np.uint64)
        return MinHashSignature(doc_id=s.doc_id, values=values, permutation_seed=seed, empty=True)
    digests = _token_digests(s.shingles)
    keys = _permutation_keys(seed, num_permutations)
    # (perm, shingle) matrix of mixed hashes; minimum over shingles per row.
    mixed = _splitmix64(digests[np.newaxis, :] ^ keys[:, np.newaxis])
    return MinHashSignature(
        doc_id=s.doc_id, values=mixed.min(axis=1), permutation_seed=seed, empty=False
    )


def _check_comparable(a: MinHashSignature, b: MinHashSignature) -> None:
    if a.permutation_seed != b.permutation_seed:
        raise SignatureMismatchError(
            f"permutation seeds differ ({a.permutation_seed} vs {b.permutation_seed})"
        )
    if len(a.values) != len(b.values):
        raise SignatureMismatchError(
            f"signature lengths differ ({len(a.values)} vs {len(b.values)})"
        )


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of agreeing signature slots; estimates Jaccard similarity."""
    _check_comparable(a, b)
    if a.empty or b.empty:
        return 1.0 if (a.empty and b.empty) else 0.0
    return float(np.count_nonzero(a.values == b.values)) / len(a.values)


def exact_jaccard(a: ShingleSet | frozenset[str] | set[str], b) -> float:
    """|a intersection b| / |a union b|, with 0/0 defined as 1."""
    sa = a.shingles if isinstance(a, ShingleSet) else a
    sb = b.shingles if isinstance(b, ShingleSet) else b
    union = len(sa | sb)
    if union == 0:
        return 1.0
    return len(sa & sb) / union


def lsh_candidates(
    signatures: Sequence[MinHashSignature], cfg: LshConfig
) -> set[tuple[str, str]]:
    """Unordered pairs of doc_ids that agree on every row of some band."""
    seeds = {sig.permutation_seed for sig in signatures}
    if len(seeds) > 1:
        raise SignatureMismatchError(f"signatures carry multiple seeds: {sorted(seeds)}")
    for sig in signatures:
        if len(sig.values) != cfg.num_permutations:
            raise SignatureMismatchError(
                f"signature length {len(sig.values)} does not match "
                f"{cfg.bands}x{cfg.rows_per_band} banding"
            )
    pairs: set[tuple[str, str]] = set()
    r = cfg.rows_per_band
    for band in range(cfg.bands):
        buckets: dict[bytes, list[str]] = {}
        for sig in signatures:
            key = sig.values[band * r : (band + 1) * r].tobytes()
            buckets.setdefault(key, []).append(sig.doc_id)
        for bucket in buckets.values():
            if len(bucket) < 2:
                continue
            bucket.sort()
            for i in range(len(bucket)):
                for j in range(i + 1, len(bucket)):
                    pairs.add((bucket[i], bucket[j]))
    return pairs


def _dedup_scan(
    doc_ids: Sequence[str],
    shingle_map: Mapping[str, frozenset[str]],
    neighbors: Mapping[str, list[str]],
    threshold: float,
) -> tuple[list[str], list[RemovalRecord]]:
    """Ascending-doc_id survivor scan over candidate edges.

    A document is removed when its exact Jaccard with any already-retained
    candidate neighbor reaches the threshold; the lowest-id such neighbor is
    recorded as the kept source.
    """
    retained: set[str] = set()
    kept_order: list[str] = []
    removals: list[RemovalRecord] = []
    for doc_id in sorted(doc_ids):
        best: tuple[str, float] | None = None
        for other in sorted(neighbors.get(doc_id, ())):
            if other not in retained:
                continue
            j = exact_jaccard(shingle_map[doc_id], shingle_map[other])
            if j >= threshold:
                best = (other, j)
                break
        if best is None:
            retained.add(doc_id)
            kept_order.append(doc_id)
        else:
            removals.append(RemovalRecord(doc_id, best[0], best[1]))
    return kept_order, removals


def _compute_signatures(
    shingle_map: Mapping[str, frozenset[str]], seed: int, num_permutations: int, threads: int
) -> dict[str, MinHashSignature]:
    """Signatures per document; independent, so workers change nothing."""
    if threads <= 1 or len(shingle_map) < 2 * threads:
        return {
            doc_id: minhash_signature(ShingleSet(doc_id, sh), seed, num_permutations)
            for doc_id, sh in shingle_map.items()
        }
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            doc_id: pool.submit(minhash_signature, ShingleSet(doc_id, sh), seed, num_permutations)
            for doc_id, sh in shingle_map.items()
        }
        return {doc_id: fut.result() for doc_id, fut in futures.items()}


def deduplicate_batch(
    docs: Sequence[TokenSequence], cfg: LshConfig, seed: int, threads: int = 1
) -> DedupBatch:
    """Deduplicate one batch of documents.

    Candidate pairs come from LSH banding and are verified with exact Jaccard
    on the shingle sets.  Documents are scanned in ascending doc_id order;
    the earliest member of a duplicate cluster survives.
    """
    shingle_map = {d.doc_id: shingle(d).shingles for d in docs}
    signatures = _compute_signatures(shingle_map, seed, cfg.num_permutations, threads)
    pairs = lsh_candidates(list(signatures.values()), cfg)
    neighbors: dict[str, list[str]] = {}
    for a, b in pairs:
        neighbors.setdefault(a, []).append(b)
        neighbors.setdefault(b, []).append(a)
    retained, removals = _dedup_scan(list(shingle_map), shingle_map, neighbors, cfg.jaccard_threshold)
    result = DedupResult(retained=retained, removals=removals, input_count=len(docs))
    return DedupBatch(
        result=result,
        cfg=cfg,
        seed=seed,
        signatures={d: signatures[d] for d in retained},
        shingles={d: shingle_map[d] for d in retained},
    )


def merge_deduplicated(a: DedupBatch, b: DedupBatch) -> DedupBatch:
    """Merge two internally deduplicated batches.

    Only candidate pairs that cross the batch boundary need verification;
    within-batch pairs were already resolved.  The combined retained set is
    scanned in ascending doc_id order, so the earlier-ingested copy of a
    cross-batch duplicate survives.
    """
    if a.seed != b.seed:
        raise SignatureMismatchError(f"batch seeds differ ({a.seed} vs {b.seed})")
    if a.cfg != b.cfg:
        raise ValueError(f"batch configs differ ({a.cfg} vs {b.cfg})")
    cfg = a.cfg
    a_ids = set(a.result.retained)
    all_sigs = list(a.signatures.values()) + list(b.signatures.values())
    cross = {
        pair
        for pair in lsh_candidates(all_sigs, cfg)
        if (pair[0] in a_ids) != (pair[1] in a_ids)
    }
    neighbors: dict[str, list[str]] = {}
    for x, y in cross:
        neighbors.setdefault(x, []).append(y)
        neighbors.setdefault(y, []).append(x)
    shingle_map = {**a.shingles, **b.shingles}
    retained, merge_removals = _dedup_scan(
        list(shingle_map), shingle_map, neighbors, cfg.jaccard_threshold
    )
    signatures = {**a.signatures, **b.signatures}
    result = DedupResult(
        retained=retained,
        removals=a.result.removals + b.result.removals + merge_removals,
        input_count=a.result.input_count + b.result.input_count,
    )
    return DedupBatch(
        result=result,
        cfg=cfg,
        seed=a.seed,
        signatures={d: signatures[d] for d in retained},
        shingles={d: shingle_map[d] for d in retained},
    )


def deduplicate(
    docs: Sequence[TokenSequence],
    cfg: LshConfig | None = None,
    seed: int = 0,
    batch_size: int | None = None,
    threads: int = 1,
) -> DedupBatch:
    """Deduplicate a corpus, batching and merging when batch_size is set."""
    cfg = cfg or LshConfig()
    if batch_size is None or batch_size >= len(docs):
        return deduplicate_batch(docs, cfg, seed, threads=threads)
    ordered = sorted(docs, key=lambda d: d.doc_id)
    merged: DedupBatch | None = None
    for start in range(0, len(ordered), batch_size):
        batch = deduplicate_batch(ordered[start : start + batch_size], cfg, seed, threads=threads)
        merged = batch if merged is None else merge_deduplicated(merged, batch)
    assert merged is not None
    return merged
