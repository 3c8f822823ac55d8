"""Lexicon-based polarity scoring and the score-difference distance matrix.

Each sentence is scored as the mean polarity of its lexicon hits, where a hit
is adjusted by negators (factor -0.5) and intensifiers (their multiplier) in
the two tokens preceding it. A comment's score is the SUM of its sentence
polarities, so long opinionated reviews land far from neutral ones; the
pairwise distance between two comments is the absolute difference of those
sums.
"""

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .distances import DistanceMatrix
from .errors import IoError, LexiconError
from .ingest import Comment, tokenize

logger = logging.getLogger(__name__)

NEGATION_FACTOR = -0.5
# A negator or intensifier modifies a hit from at most this many tokens back.
MODIFIER_WINDOW = 2


@dataclass
class Lexicon:
    """Token polarities/subjectivities plus negator and intensifier tables."""

    entries: dict[str, tuple[float, float]] = field(default_factory=dict)
    negators: set[str] = field(default_factory=set)
    intensifiers: dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries) + len(self.negators) + len(self.intensifiers)


@dataclass(frozen=True)
class SentimentScore:
    """Per-sentence polarities, their sum, and mean subjectivity of hits."""

    sentence_polarities: list[float]
    total_polarity: float
    mean_subjectivity: float


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a TSV lexicon: token, polarity, subjectivity, optional class.

    Class is one of ``word`` (default), ``negator``, or
    ``intensifier:<multiplier>``. Later lines overwrite earlier ones, and a
    token holds exactly one role. Blank lines and ``#`` comments are skipped.

    Raises LexiconError (with line number) on malformed lines or values
    outside polarity [-1,1] / subjectivity [0,1] / multiplier > 0, and
    IoError when the file cannot be read as UTF-8.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read lexicon {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IoError(f"lexicon {path} is not valid UTF-8: {exc}") from exc

    lexicon = Lexicon()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) < 3:
            raise LexiconError("expected token<TAB>polarity<TAB>subjectivity", lineno)
        token = fields[0].strip().lower()
        if not token:
            raise LexiconError("empty token", lineno)
        try:
            polarity = float(fields[1])
            subjectivity = float(fields[2])
        except ValueError:
            raise LexiconError("polarity and subjectivity must be numbers", lineno) from None
        if not -1.0 <= polarity <= 1.0:
            raise LexiconError(f"polarity {polarity} outside [-1, 1]", lineno)
        if not 0.0 <= subjectivity <= 1.0:
            raise LexiconError(f"subjectivity {subjectivity} outside [0, 1]", lineno)

        cls = fields[3].strip() if len(fields) > 3 and fields[3].strip() else "word"
        # One role per token: a redefinition drops the previous role first.
        lexicon.entries.pop(token, None)
        lexicon.negators.discard(token)
        lexicon.intensifiers.pop(token, None)
        if cls == "word":
            lexicon.entries[token] = (polarity, subjectivity)
        elif cls == "negator":
            lexicon.negators.add(token)
        elif cls.startswith("intensifier:"):
            try:
                multiplier = float(cls.split(":", 1)[1])
            except ValueError:
                raise LexiconError(f"bad intensifier multiplier in {cls!r}", lineno) from None
            if multiplier <= 0.0:
                raise LexiconError(f"intensifier multiplier {multiplier} must be > 0", lineno)
            lexicon.intensifiers[token] = multiplier
        else:
            raise LexiconError(f"unknown class {cls!r}", lineno)

    logger.info(
        "loaded lexicon %s: %d words, %d negators, %d intensifiers",
        path, len(lexicon.entries), len(lexicon.negators), len(lexicon.intensifiers),
    )
    return lexicon


def default_lexicon_path() -> Path:
    return Path(resources.files("peakspam").joinpath("data/default_lexicon.tsv"))


def default_lexicon() -> Lexicon:
    """The lexicon bundled with the package."""
    return load_lexicon(default_lexicon_path())


def _score_tokens(tokens: list[str], lexicon: Lexicon) -> tuple[float, float, int]:
    """(polarity, subjectivity, hit count) for one tokenized sentence."""
    polarities = []
    subjectivities = []
    for pos, token in enumerate(tokens):
        entry = lexicon.entries.get(token)
        if entry is None:
            continue
        adjusted = entry[0]
        for prev in tokens[max(0, pos - MODIFIER_WINDOW):pos]:
            if prev in lexicon.negators:
                adjusted *= NEGATION_FACTOR
            multiplier = lexicon.intensifiers.get(prev)
            if multiplier is not None:
                adjusted *= multiplier
        polarities.append(adjusted)
        subjectivities.append(entry[1])
    if not polarities:
        return 0.0, 0.0, 0
    polarity = sum(polarities) / len(polarities)
    polarity = min(1.0, max(-1.0, polarity))
    return polarity, sum(subjectivities) / len(subjectivities), len(polarities)


def score_sentence(tokens: list[str], lexicon: Lexicon) -> tuple[float, float]:
    """Polarity in [-1, 1] and subjectivity in [0, 1] for lowercase tokens.

    Sentence polarity is the arithmetic mean of the adjusted hit polarities,
    clamped to [-1, 1]; subjectivity is the mean over hits. No hits gives
    (0.0, 0.0).
    """
    polarity, subjectivity, _ = _score_tokens(tokens, lexicon)
    return polarity, subjectivity


def score_comment(comment: Comment, lexicon: Lexicon) -> SentimentScore:
    """Score every sentence of a comment and sum the polarities.

    mean_subjectivity averages only sentences that had at least one lexicon
    hit (0.0 when no sentence hit anything).
    """
    polarities = []
    hit_subjectivities = []
    for sentence in comment.sentences:
        polarity, subjectivity, hits = _score_tokens(tokenize(sentence), lexicon)
        polarities.append(polarity)
        if hits:
            hit_subjectivities.append(subjectivity)
    mean_subjectivity = (
        sum(hit_subjectivities) / len(hit_subjectivities) if hit_subjectivities else 0.0
    )
    return SentimentScore(
        sentence_polarities=polarities,
        total_polarity=float(sum(polarities)),
        mean_subjectivity=mean_subjectivity,
    )


def score_corpus(comments: list[Comment], lexicon: Lexicon) -> list[SentimentScore]:
    return [score_comment(comment, lexicon) for comment in comments]


def total_polarities(scores: list[SentimentScore]) -> np.ndarray:
    return np.array([score.total_polarity for score in scores], dtype=np.float64)


def pairwise_distances(scores: list[SentimentScore]) -> DistanceMatrix:
    """Condensed |total_i - total_j| distances over the comment scores."""
    return DistanceMatrix.from_1d(total_polarities(scores))


def scores_csv_text(scores: list[SentimentScore], ids: list[int] | None = None) -> str:
    """Scores export: ``id,total_polarity,mean_subjectivity``, 6 decimals."""
    if ids is None:
        ids = list(range(len(scores)))
    lines = ["id,total_polarity,mean_subjectivity"]
    for comment_id, score in zip(ids, scores):
        lines.append(
            f"{comment_id},{score.total_polarity:.6f},{score.mean_subjectivity:.6f}"
        )
    return "\n".join(lines) + "\n"
