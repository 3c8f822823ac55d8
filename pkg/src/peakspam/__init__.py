"""peakspam: screen review corpora for coordinated fake comments.

Pipeline: load comments, score each with a lexicon sentiment model, turn
score differences into pairwise distances, cluster with density peaks, and
flag the clusters that look like opinion spam.
"""

__version__ = "0.1.0"

from . import dpc
from .distances import DistanceMatrix
from .errors import (
    DegenerateDistancesError,
    EmptyCorpusError,
    IoError,
    LexiconError,
    ParamError,
    PeakspamError,
    SchemaError,
    ShapeError,
    TooFewPointsError,
)
from .ingest import Comment, load_comments, split_sentences, tokenize
from .pipeline import (
    DetectionConfig,
    DetectionReport,
    ExtremeSentiment,
    TopkDominance,
    flag_suspect_clusters,
    report_json_text,
    run_detection,
    run_detection_with_graph,
    topk_membership,
)
from .sentiment import (
    Lexicon,
    SentimentScore,
    default_lexicon,
    default_lexicon_path,
    load_lexicon,
    pairwise_distances,
    score_comment,
    score_corpus,
    score_sentence,
    scores_csv_text,
)

__all__ = [
    "Comment",
    "DegenerateDistancesError",
    "DetectionConfig",
    "DetectionReport",
    "DistanceMatrix",
    "EmptyCorpusError",
    "ExtremeSentiment",
    "IoError",
    "Lexicon",
    "LexiconError",
    "ParamError",
    "PeakspamError",
    "SchemaError",
    "SentimentScore",
    "ShapeError",
    "TooFewPointsError",
    "TopkDominance",
    "default_lexicon",
    "default_lexicon_path",
    "dpc",
    "flag_suspect_clusters",
    "load_comments",
    "load_lexicon",
    "pairwise_distances",
    "report_json_text",
    "run_detection",
    "run_detection_with_graph",
    "score_comment",
    "score_corpus",
    "score_sentence",
    "scores_csv_text",
    "split_sentences",
    "tokenize",
    "topk_membership",
]
