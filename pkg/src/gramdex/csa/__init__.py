"""Compressed-suffix-array indexing of integer-encoded token corpora.

Builds an immutable count-only FM-index per corpus (BWT + wavelet-matrix
rank support + cumulative symbol table) and answers exact occurrence counts
for token patterns of any length via backward search.
"""

from .vocab import TERMINATOR, SEPARATOR, FIRST_TOKEN_ID, Vocabulary
from .encode import EncodedCorpus, encode_corpus
from .suffix import IndexBuildError, build_suffix_array, bwt_from_sa
from .bits import BitVector
from .wavelet import WaveletMatrix
from .index import FmIndex, IndexMetadata, build_fm_index, naive_count
from .io import (
    FORMAT_VERSION,
    MAGIC,
    BadMagicError,
    ChecksumError,
    IndexFormatError,
    TruncatedIndexError,
    UnsupportedVersionError,
    deserialize,
    load_index,
    save_index,
    serialize,
)

__all__ = [
    "TERMINATOR",
    "SEPARATOR",
    "FIRST_TOKEN_ID",
    "Vocabulary",
    "EncodedCorpus",
    "encode_corpus",
    "IndexBuildError",
    "build_suffix_array",
    "bwt_from_sa",
    "BitVector",
    "WaveletMatrix",
    "FmIndex",
    "IndexMetadata",
    "build_fm_index",
    "naive_count",
    "FORMAT_VERSION",
    "MAGIC",
    "IndexFormatError",
    "BadMagicError",
    "ChecksumError",
    "TruncatedIndexError",
    "UnsupportedVersionError",
    "serialize",
    "deserialize",
    "save_index",
    "load_index",
]
