"""Text normalization and word-level tokenization.

The same two-stage pipeline (normalize, then tokenize) is applied to corpus
documents at ingestion time and to query text at search time, so a phrase
typed into a query box always produces the token sequence that was indexed.
Case is never folded.
"""

from __future__ import annotations

import json
import re
import string
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

# Typographic punctuation mapped to ASCII equivalents.  The table is fixed:
# changing it invalidates every index built with the old table.
_PUNCT_MAP = {
    0x2018: "'",   # left single quotation mark
    0x2019: "'",   # right single quotation mark
    0x201A: "'",   # single low-9 quotation mark
    0x201B: "'",   # single high-reversed-9 quotation mark
    0x201C: '"',   # left double quotation mark
    0x201D: '"',   # right double quotation mark
    0x201E: '"',   # double low-9 quotation mark
    0x201F: '"',   # double high-reversed-9 quotation mark
    0x00AB: '"',   # left guillemet
    0x00BB: '"',   # right guillemet
    0x2010: "-",   # hyphen
    0x2011: "-",   # non-breaking hyphen
    0x2012: "-",   # figure dash
    0x2013: "-",   # en dash
    0x2014: "-",   # em dash
    0x2015: "-",   # horizontal bar
    0x2212: "-",   # minus sign
    0x2026: "...", # horizontal ellipsis
}

_MULTISPACE_RE = re.compile(r" {2,}")

# ASCII punctuation peeled off token edges; word-internal occurrences stay.
_PUNCT_CHARS = frozenset(string.punctuation)


@dataclass
class RawDocument:
    """One unit of corpus text before any processing."""

    doc_id: str
    text: str
    corpus_id: str = ""


@dataclass
class TokenSequence:
    """Tokens of a single document, in order."""

    doc_id: str
    tokens: list[str]

    def __len__(self) -> int:
        return len(self.tokens)


def normalize_text(raw: str) -> str:
    """Normalize punctuation and strip non-printing characters.

    Rules, in order: control characters (category Cc, except newline and tab)
    and format characters (Cf) are removed; typographic punctuation is mapped
    to ASCII per the fixed table above; Unicode space separators and tab
    become a plain space; runs of spaces collapse to one.  Case is preserved.
    Idempotent.
    """
    out: list[str] = []
    append = out.append
    for ch in raw:
        if "\x20" <= ch <= "\x7e" or ch == "\n":
            append(ch)
            continue
        if ch == "\t":
            append(" ")
            continue
        cat = unicodedata.category(ch)
        if cat in ("Cc", "Cf"):
            continue
        mapped = _PUNCT_MAP.get(ord(ch))
        if mapped is not None:
            append(mapped)
        elif cat == "Zs":
            append(" ")
        else:
            append(ch)
    return _MULTISPACE_RE.sub(" ", "".join(out))


def tokenize(normalized: str) -> list[str]:
    """Split normalized text into word-level tokens.

    Whitespace separates tokens.  Leading and trailing ASCII punctuation on a
    chunk is peeled into standalone single-character tokens; word-internal
    punctuation (hyphens, apostrophes, decimal points) stays attached.
    """
    tokens: list[str] = []
    for chunk in normalized.split():
        i, j = 0, len(chunk)
        while i < j and chunk[i] in _PUNCT_CHARS:
            i += 1
        while j > i and chunk[j - 1] in _PUNCT_CHARS:
            j -= 1
        tokens.extend(chunk[:i])
        if i < j:
            tokens.append(chunk[i:j])
        tokens.extend(chunk[j:])
    return tokens


def prepare_document(doc: RawDocument) -> TokenSequence:
    """Normalize and tokenize one document."""
    return TokenSequence(doc_id=doc.doc_id, tokens=tokenize(normalize_text(doc.text)))


def tokenize_query(text: str) -> list[str]:
    """Tokenize query text exactly as corpus text is tokenized."""
    return tokenize(normalize_text(text))


class IngestError(Exception):
    """Malformed ingestion input; carries the offending line number."""

    def __init__(self, path: str, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no
        self.reason = reason


def read_jsonl_documents(path: str | Path, corpus_id: str = "") -> Iterator[RawDocument]:
    """Yield documents from a JSON-lines file with `doc_id` and `text` fields.

    Invalid UTF-8 byte sequences are replaced with U+FFFD; malformed lines
    raise IngestError with the line number.
    """
    path = Path(path)
    seen: set[str] = set()
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(str(path), line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict) or "doc_id" not in obj or "text" not in obj:
                raise IngestError(str(path), line_no, "object must have doc_id and text fields")
            doc_id = str(obj["doc_id"])
            if doc_id in seen:
                raise IngestError(str(path), line_no, f"duplicate doc_id {doc_id!r}")
            seen.add(doc_id)
            yield RawDocument(doc_id=doc_id, text=str(obj["text"]), corpus_id=corpus_id)


def read_plain_documents(path: str | Path, corpus_id: str = "") -> Iterator[RawDocument]:
    """Yield blank-line-separated blocks of a plain-text file as documents.

    Documents receive synthetic ids `<stem>-000001`, `<stem>-000002`, ...
    """
    path = Path(path)
    stem = path.stem or "doc"
    block: list[str] = []
    n = 0

    def flush() -> RawDocument | None:
        nonlocal n
        if not block:
            return None
        n += 1
        doc = RawDocument(doc_id=f"{stem}-{n:06d}", text="\n".join(block), corpus_id=corpus_id)
        block.clear()
        return doc

    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.strip():
                block.append(line)
            else:
                doc = flush()
                if doc is not None:
                    yield doc
    doc = flush()
    if doc is not None:
        yield doc


def prepare_all(docs: Iterable[RawDocument]) -> list[TokenSequence]:
    """Normalize and tokenize a document stream."""
    return [prepare_document(d) for d in docs]
