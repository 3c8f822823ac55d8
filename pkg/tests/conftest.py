"""Shared fixtures: synthetic corpora whose sentiment totals are exact.

The wordbook trick gives full control over comment scores: each comment is
one sentence holding a single made-up token, and a per-test lexicon maps that
token to the exact polarity the comment should total. Targets must lie in
[-1, 1] so the single-hit mean and clamp are identities.
"""

import csv

import numpy as np
import pytest

from peakspam.ingest import Comment
from peakspam.sentiment import Lexicon

BLOB_SEED = 20260811
TABLE4_SEED = 7

# Mirrors the head-of-corpus dominance pattern: 13 of the first 20 comments
# in the mid blob (B), 6 in the low blob (A), 1 in the high blob (C).
TABLE4_PATTERN = "BABBBBBBBABBCABBAABA"


def blob_totals() -> np.ndarray:
    """100 totals in three blobs: 30 near -0.8, 40 near 0.0, 30 near +0.8."""
    rng = np.random.default_rng(BLOB_SEED)
    lo = -0.8 + rng.uniform(-0.02, 0.02, 30)
    mid = rng.uniform(-0.02, 0.02, 40)
    hi = 0.8 + rng.uniform(-0.02, 0.02, 30)
    return np.concatenate([lo, mid, hi])


def blob_label(total: float) -> str:
    return "low" if total < -0.4 else ("high" if total > 0.4 else "mid")


def table4_totals() -> np.ndarray:
    """Same three blobs, but interleaved so the mid blob holds 13 of the
    first 20 comments (then 6 low, 1 high)."""
    rng = np.random.default_rng(TABLE4_SEED)
    counts = {"A": 30, "B": 40, "C": 30}
    center = {"A": -0.8, "B": 0.0, "C": 0.8}
    labels = list(TABLE4_PATTERN)
    for lab in "ABC":
        labels += [lab] * (counts[lab] - TABLE4_PATTERN.count(lab))
    return np.array([center[lab] + rng.uniform(-0.02, 0.02) for lab in labels])


def wordbook_token(i: int) -> str:
    return f"w{i:04d}"


def wordbook_comments(totals) -> tuple[list[Comment], Lexicon]:
    """One single-token comment per target total, plus the matching lexicon."""
    entries = {}
    comments = []
    for i, total in enumerate(totals):
        total = float(total)
        assert -1.0 <= total <= 1.0, "wordbook targets must fit one sentence hit"
        entries[wordbook_token(i)] = (total, 1.0)
        comments.append(Comment.from_text(i, f"I feel {wordbook_token(i)}."))
    return comments, Lexicon(entries=entries)


def write_corpus_csv(path, texts) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["content"])
        for text in texts:
            writer.writerow([text])


def write_wordbook_lexicon(path, totals) -> None:
    # repr round-trips floats exactly, so CLI runs see the same totals
    # as the in-memory fixtures.
    lines = [f"{wordbook_token(i)}\t{float(t)!r}\t1.0" for i, t in enumerate(totals)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture
def blob_fixture():
    totals = blob_totals()
    comments, lexicon = wordbook_comments(totals)
    return totals, comments, lexicon


@pytest.fixture
def blob_files(tmp_path):
    """Blob corpus and lexicon on disk for CLI runs."""
    totals = blob_totals()
    corpus = tmp_path / "blobs.csv"
    lexicon = tmp_path / "blobs_lexicon.tsv"
    write_corpus_csv(corpus, [f"I feel {wordbook_token(i)}." for i in range(len(totals))])
    write_wordbook_lexicon(lexicon, totals)
    return totals, corpus, lexicon
