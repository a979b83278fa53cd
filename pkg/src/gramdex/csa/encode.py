"""Integer encoding of tokenized corpora.

The corpus becomes one symbol sequence `doc1 SEP doc2 SEP ... docN TERM`
with the vocabulary assigned in first-occurrence order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..textprep import TokenSequence
from .vocab import SEPARATOR, TERMINATOR, Vocabulary


@dataclass
class EncodedCorpus:
    """Symbol sequence, per-document start offsets, and the vocabulary."""

    symbols: np.ndarray  # int32
    doc_offsets: dict[str, int]
    vocabulary: Vocabulary

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def doc_count(self) -> int:
        return len(self.doc_offsets)

    @property
    def token_count(self) -> int:
        """Real tokens, excluding separators and the terminator."""
        return len(self.symbols) - self.doc_count if self.doc_offsets else 0


def encode_corpus(docs: Sequence[TokenSequence]) -> EncodedCorpus:
    """Encode tokenized documents into one terminated symbol sequence."""
    vocab = Vocabulary()
    symbols: list[int] = []
    offsets: dict[str, int] = {}
    for i, doc in enumerate(docs):
        if i > 0:
            symbols.append(SEPARATOR)
        offsets[doc.doc_id] = len(symbols)
        for token in doc.tokens:
            symbols.append(vocab.add(token))
    symbols.append(TERMINATOR)
    return EncodedCorpus(
        symbols=np.asarray(symbols, dtype=np.int32),
        doc_offsets=offsets,
        vocabulary=vocab,
    )
