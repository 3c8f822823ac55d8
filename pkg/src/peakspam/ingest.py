"""Corpus loading and light text normalization.

Reviews arrive as CSV (column ``content``) or JSONL (key ``content``). Each
row becomes a :class:`Comment` with a dense 0-based id, the verbatim text,
and a rule-based sentence split. Tokenization lowercases and keeps internal
apostrophes so contractions like "don't" survive as single tokens.
"""

import csv
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyCorpusError, IoError, SchemaError

# Terminal punctuation ends a sentence only when followed by whitespace or
# the end of the text; "3.5 stars" therefore stays intact.
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")

# Alphanumeric runs, optionally chained by internal apostrophes.
_TOKEN = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)


@dataclass
class Comment:
    """One review: dense id, verbatim text, and its sentence split."""

    id: int
    text: str
    sentences: list[str] = field(default_factory=list)

    @classmethod
    def from_text(cls, comment_id: int, text: str) -> "Comment":
        return cls(id=comment_id, text=text, sentences=split_sentences(text))


def split_sentences(text: str) -> list[str]:
    """Split text on terminal ``.``, ``!``, ``?`` followed by whitespace/end.

    Segments are stripped of surrounding whitespace and empty segments are
    dropped, so every non-whitespace character of the input survives exactly
    once across the returned sentences.
    """
    if not text:
        return []
    parts = _SENTENCE_BREAK.split(text)
    return [p.strip() for p in parts if p.strip()]


def tokenize(sentence: str) -> list[str]:
    """Lowercase tokens split on non-alphanumeric boundaries.

    Internal apostrophes are kept ("don't" is one token); leading or trailing
    apostrophes are stripped with the other punctuation.
    """
    return _TOKEN.findall(sentence.lower())


def load_comments(path: str | Path, fmt: str = "csv") -> list[Comment]:
    """Load a review corpus into Comments, ids assigned in file order.

    fmt is "csv" (header row must contain a ``content`` column) or "jsonl"
    (one object per line with a ``content`` key). Text is preserved verbatim.

    Raises IoError for a missing/unreadable/non-UTF-8 file, SchemaError when
    the content column/key is absent, EmptyCorpusError for zero data rows.
    """
    if fmt not in ("csv", "jsonl"):
        raise SchemaError(f"unknown corpus format {fmt!r} (expected 'csv' or 'jsonl')")
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read corpus {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IoError(f"corpus {path} is not valid UTF-8: {exc}") from exc

    texts = _parse_csv(raw, path) if fmt == "csv" else _parse_jsonl(raw, path)
    if not texts:
        raise EmptyCorpusError(f"corpus {path} has no data rows")
    return [Comment.from_text(i, text) for i, text in enumerate(texts)]


def _parse_csv(raw: str, path: Path) -> list[str]:
    # StringIO, not splitlines: quoted fields may span lines (RFC 4180)
    reader = csv.reader(io.StringIO(raw))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyCorpusError(f"corpus {path} is empty") from None
    if "content" not in header:
        raise SchemaError(f"corpus {path} has no 'content' column (header: {header})")
    col = header.index("content")
    texts = []
    for row in reader:
        if not row:
            continue
        if col >= len(row):
            raise SchemaError(
                f"corpus {path} data row {len(texts) + 1} is missing the 'content' field"
            )
        texts.append(row[col])
    return texts


def _parse_jsonl(raw: str, path: Path) -> list[str]:
    texts = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"corpus {path} line {lineno} is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "content" not in obj:
            raise SchemaError(f"corpus {path} line {lineno} has no 'content' key")
        if not isinstance(obj["content"], str):
            raise SchemaError(f"corpus {path} line {lineno}: 'content' must be a string")
        texts.append(obj["content"])
    return texts
