"""On-disk index format.

Layout (all integers little-endian):

    magic           8 bytes  "KOALAIDX"
    version         u32
    metadata        u32 length + UTF-8 JSON (corpus_id, doc_count,
                    token_count, built_at, sigma, length)
    vocabulary      u32 token count, then per token u32 length + UTF-8 bytes
                    (ids implicit: 2, 3, ... in stored order)
    c_table         (sigma + 1) x u64
    wavelet matrix  u8 depth, u64 sequence length, then per level:
                    u64 zero-count, u64 word count, words as u64[]
    trailer         u64 CRC-64/XZ over every preceding byte

Rank prefix blocks are rebuilt at load time rather than stored.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .bits import BitVector
from .index import FmIndex, IndexMetadata
from .vocab import Vocabulary
from .wavelet import WaveletMatrix

MAGIC = b"KOALAIDX"
FORMAT_VERSION = 1


class IndexFormatError(Exception):
    """Base class for index (de)serialization failures."""


class BadMagicError(IndexFormatError):
    pass


class UnsupportedVersionError(IndexFormatError):
    pass


class TruncatedIndexError(IndexFormatError):
    pass


class ChecksumError(IndexFormatError):
    pass


# CRC-64/XZ: polynomial 0x42F0E1EBA9EA3693 reflected, init and xorout all-ones.
_CRC64_POLY_REFLECTED = 0xC96C5795D7870F42


def _make_crc64_tables() -> list[list[int]]:
    table0 = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = (crc >> 1) ^ (_CRC64_POLY_REFLECTED if crc & 1 else 0)
        table0.append(crc)
    tables = [table0]
    for k in range(1, 8):
        prev = tables[k - 1]
        tables.append([(prev[b] >> 8) ^ table0[prev[b] & 0xFF] for b in range(256)])
    return tables


_CRC_TABLES = _make_crc64_tables()


def crc64(data: bytes, crc: int = 0) -> int:
    """CRC-64/XZ, slice-by-8."""
    crc ^= 0xFFFFFFFFFFFFFFFF
    t0, t1, t2, t3, t4, t5, t6, t7 = _CRC_TABLES
    n8 = len(data) & ~7
    for i in range(0, n8, 8):
        (word,) = struct.unpack_from("<Q", data, i)
        crc ^= word
        crc = (
            t7[crc & 0xFF]
            ^ t6[(crc >> 8) & 0xFF]
            ^ t5[(crc >> 16) & 0xFF]
            ^ t4[(crc >> 24) & 0xFF]
            ^ t3[(crc >> 32) & 0xFF]
            ^ t2[(crc >> 40) & 0xFF]
            ^ t1[(crc >> 48) & 0xFF]
            ^ t0[crc >> 56]
        )
    for b in data[n8:]:
        crc = (crc >> 8) ^ t0[(crc ^ b) & 0xFF]
    return crc ^ 0xFFFFFFFFFFFFFFFF


def serialize(index: FmIndex) -> bytes:
    parts: list[bytes] = [MAGIC, struct.pack("<I", FORMAT_VERSION)]
    meta = {
        "corpus_id": index.meta.corpus_id,
        "doc_count": index.meta.doc_count,
        "token_count": index.meta.token_count,
        "built_at": index.meta.built_at,
        "sigma": index.sigma,
        "length": index.length,
    }
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    parts.append(struct.pack("<I", len(meta_bytes)))
    parts.append(meta_bytes)

    tokens = index.vocabulary.tokens
    parts.append(struct.pack("<I", len(tokens)))
    for token in tokens:
        raw = token.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)

    parts.append(index.c_table.astype("<u8").tobytes())

    wm = index.wm
    parts.append(struct.pack("<BQ", wm.depth, wm.length))
    for level, bv in enumerate(wm.levels):
        parts.append(struct.pack("<QQ", wm.zeros[level], len(bv.words)))
        parts.append(bv.words.astype("<u8").tobytes())

    payload = b"".join(parts)
    return payload + struct.pack("<Q", crc64(payload))


class _Reader:
    __slots__ = ("data", "pos")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedIndexError(
                f"needed {n} bytes at offset {self.pos}, only {len(self.data) - self.pos} left"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def u8(self) -> int:
        return self.take(1)[0]


def deserialize(data: bytes) -> FmIndex:
    if len(data) < len(MAGIC):
        raise TruncatedIndexError(f"file is {len(data)} bytes, shorter than the magic")
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError(f"bad magic {data[:len(MAGIC)]!r}")
    if len(data) < len(MAGIC) + 4 + 8:
        raise TruncatedIndexError("file ends before the version and checksum")
    (version,) = struct.unpack_from("<I", data, len(MAGIC))
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"format version {version}, supported: {FORMAT_VERSION}")
    (stored_crc,) = struct.unpack_from("<Q", data, len(data) - 8)
    payload = data[:-8]
    actual = crc64(payload)
    if actual != stored_crc:
        raise ChecksumError(f"checksum mismatch: stored {stored_crc:#x}, computed {actual:#x}")

    r = _Reader(payload)
    r.take(len(MAGIC) + 4)
    meta_raw = r.take(r.u32())
    try:
        meta = json.loads(meta_raw)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"metadata block is not valid JSON: {exc}") from exc

    n_tokens = r.u32()
    vocab = Vocabulary()
    for _ in range(n_tokens):
        vocab.add(r.take(r.u32()).decode("utf-8"))
    sigma = int(meta["sigma"])
    if vocab.sigma != sigma:
        raise IndexFormatError(f"vocabulary has {vocab.sigma} symbols, metadata says {sigma}")

    c_table = np.frombuffer(r.take((sigma + 1) * 8), dtype="<u8").astype(np.int64)

    depth = r.u8()
    length = r.u64()
    levels: list[BitVector] = []
    zeros: list[int] = []
    expected_words = (length + 63) // 64
    for _ in range(depth):
        z = r.u64()
        n_words = r.u64()
        if n_words != expected_words:
            raise IndexFormatError(
                f"level has {n_words} words, expected {expected_words} for length {length}"
            )
        words = np.frombuffer(r.take(n_words * 8), dtype="<u8").copy()
        bv = BitVector(length, words)
        if bv.zeros != z:
            raise IndexFormatError(f"level zero-count {z} does not match bit payload")
        levels.append(bv)
        zeros.append(z)
    if r.pos != len(payload):
        raise IndexFormatError(f"{len(payload) - r.pos} unexpected trailing payload bytes")

    wm = WaveletMatrix(length, sigma, levels, zeros)
    meta_obj = IndexMetadata(
        corpus_id=str(meta["corpus_id"]),
        doc_count=int(meta["doc_count"]),
        token_count=int(meta["token_count"]),
        built_at=str(meta["built_at"]),
        format_version=version,
    )
    return FmIndex(wm=wm, c_table=c_table, vocabulary=vocab, meta=meta_obj)


def save_index(index: FmIndex, path: str | Path) -> int:
    """Write the index to disk; returns the byte size written."""
    blob = serialize(index)
    Path(path).write_bytes(blob)
    return len(blob)


def load_index(path: str | Path) -> FmIndex:
    return deserialize(Path(path).read_bytes())
