"""gramdex: token-level corpus indexing and overlap forensics.

Pipeline: normalize and tokenize documents (`textprep`), drop near-duplicates
(`dedup`), build an immutable count-only FM-index per corpus (`csa`), then
answer occurrence-count queries and overlap statistics (`stats`) from a
library call, the `gramdex` CLI, or the HTTP service (`gramdex.service`,
imported on demand so the core library stays light).
"""

from . import csa, dedup, stats, textprep
from .csa import FmIndex, build_fm_index, encode_corpus, load_index, save_index
from .textprep import RawDocument, TokenSequence, normalize_text, tokenize

__version__ = "0.1.0"

__all__ = [
    "csa",
    "dedup",
    "stats",
    "textprep",
    "FmIndex",
    "build_fm_index",
    "encode_corpus",
    "load_index",
    "save_index",
    "RawDocument",
    "TokenSequence",
    "normalize_text",
    "tokenize",
    "__version__",
]
