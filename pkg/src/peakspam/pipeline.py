"""End-to-end detection: score, cluster, flag, and optionally re-cluster.

Fabricated reviews tend to pile up praise or scorn, so their summed sentiment
totals sit in tight extreme clumps. The pipeline clusters comments by score
difference, flags suspicious clusters (by sentiment extremity or by how much
of the corpus head one cluster swallows), and can recursively re-cluster the
flagged groups to sharpen the picture.
"""

import json
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .dpc import core as dpc
from .errors import DegenerateDistancesError, ParamError, TooFewPointsError
from .ingest import Comment
from .sentiment import Lexicon, SentimentScore, score_corpus, total_polarities
from .distances import DistanceMatrix


@dataclass(frozen=True)
class ExtremeSentiment:
    """Flag clusters whose mean absolute total polarity reaches `threshold`."""

    threshold: float = 0.5

    def __post_init__(self):
        if self.threshold < 0.0:
            raise ParamError(f"threshold must be >= 0, got {self.threshold}")


@dataclass(frozen=True)
class TopkDominance:
    """Flag clusters holding at least `fraction` of the first k comments."""

    k: int = 20
    fraction: float = 0.6

    def __post_init__(self):
        if self.k < 1:
            raise ParamError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.fraction <= 1.0:
            raise ParamError(f"fraction must be in (0, 1], got {self.fraction}")


FlagStrategy = Union[ExtremeSentiment, TopkDominance]
CenterMode = Union[dpc.FixedCenters, dpc.GammaJump]

MAX_ITERATE_DEPTH = 3
MIN_SUBCLUSTER_FLOOR = 4


@dataclass(frozen=True)
class DetectionConfig:
    t: float = 0.02
    kernel: str = "cutoff"
    center_mode: CenterMode = dpc.GammaJump()
    assignment_rule: str = "nearest_center"
    flag_strategy: FlagStrategy = ExtremeSentiment()
    iterate_depth: int = 1
    min_subcluster: int = 20
    top_k: int = 20

    def __post_init__(self):
        if not 0 <= self.iterate_depth <= MAX_ITERATE_DEPTH:
            raise ParamError(
                f"iterate_depth must be in [0, {MAX_ITERATE_DEPTH}], got {self.iterate_depth}"
            )
        if self.min_subcluster < MIN_SUBCLUSTER_FLOOR:
            raise ParamError(
                f"min_subcluster must be >= {MIN_SUBCLUSTER_FLOOR}, got {self.min_subcluster}"
            )
        if self.top_k < 1:
            raise ParamError(f"top_k must be >= 1, got {self.top_k}")

    def to_dict(self) -> dict:
        if isinstance(self.center_mode, dpc.FixedCenters):
            mode = {"mode": "fixed", "k": self.center_mode.k}
        else:
            mode = {"mode": "gamma_jump", "ratio": self.center_mode.ratio}
        if isinstance(self.flag_strategy, ExtremeSentiment):
            strategy = {"strategy": "extreme_sentiment", "threshold": self.flag_strategy.threshold}
        else:
            strategy = {
                "strategy": "topk_dominance",
                "k": self.flag_strategy.k,
                "fraction": self.flag_strategy.fraction,
            }
        return {
            "t": self.t,
            "kernel": self.kernel,
            "center_mode": mode,
            "assignment_rule": self.assignment_rule,
            "flag_strategy": strategy,
            "iterate_depth": self.iterate_depth,
            "min_subcluster": self.min_subcluster,
            "top_k": self.top_k,
        }


class ClusterRow(NamedTuple):
    index: int
    center_id: int
    size: int


class TopkRow(NamedTuple):
    rank: int
    center_id: int


class SubReport(NamedTuple):
    cluster: int
    report: "DetectionReport"


@dataclass(frozen=True, eq=False)
class DetectionReport:
    """Cluster table, corpus-head membership, flags, and nested refinements."""

    cluster_table: list[ClusterRow]
    topk_table: list[TopkRow]
    flagged: list[int]
    subreports: Optional[list[SubReport]]
    params: dict

    def to_dict(self) -> dict:
        return {
            "clusters": [
                {"index": row.index, "center_id": row.center_id, "size": row.size}
                for row in self.cluster_table
            ],
            "top_k": [{"rank": row.rank, "center_id": row.center_id} for row in self.topk_table],
            "flagged": list(self.flagged),
            "subreports": [
                {"cluster": sub.cluster, "report": sub.report.to_dict()}
                for sub in (self.subreports or [])
            ],
            "params": self.params,
        }


def report_json_text(report: DetectionReport) -> str:
    """Stable-key-order JSON; identical reports serialize byte-identically."""
    return json.dumps(report.to_dict(), indent=2) + "\n"


def flag_suspect_clusters(model: dpc.ClusterModel, scores: list[SentimentScore],
                          strategy: FlagStrategy) -> list[int]:
    """Cluster indices matching the strategy, ascending.

    ExtremeSentiment flags clusters whose members average a large absolute
    total polarity. TopkDominance flags clusters holding at least `fraction`
    of the first min(k, N) comments in input order.
    """
    if model.assignment.shape[0] != len(scores):
        raise ParamError("model and scores cover different point counts")
    totals = total_polarities(scores)
    flagged = []
    if isinstance(strategy, ExtremeSentiment):
        abs_totals = np.abs(totals)
        for cluster in range(model.n_clusters):
            members = model.members(cluster)
            if members.size and abs_totals[members].mean() >= strategy.threshold:
                flagged.append(cluster)
    elif isinstance(strategy, TopkDominance):
        k_eff = min(strategy.k, len(scores))
        head = model.assignment[:k_eff]
        counts = np.bincount(head, minlength=model.n_clusters)
        for cluster in range(model.n_clusters):
            if counts[cluster] / k_eff >= strategy.fraction:
                flagged.append(cluster)
    else:
        raise ParamError(f"unknown flag strategy {strategy!r}")
    return flagged


def topk_membership(model: dpc.ClusterModel, comments: list[Comment], k: int) -> list[TopkRow]:
    """For the first min(k, N) comments, the center id of their cluster."""
    if k < 1:
        raise ParamError(f"k must be >= 1, got {k}")
    rows = []
    for pos in range(min(k, len(comments))):
        center_pos = int(model.assignment[pos])
        center_id = comments[int(model.centers[center_pos])].id
        rows.append(TopkRow(rank=pos + 1, center_id=center_id))
    return rows


def _detect(comments: list[Comment], scores: list[SentimentScore],
            config: DetectionConfig, depth: int) -> tuple[DetectionReport, dpc.ClusteringResult]:
    dm = DistanceMatrix.from_1d(total_polarities(scores))
    params = dpc.DensityParams(kernel=config.kernel, t=config.t)
    result = dpc.cluster_distances(dm, params, config.center_mode, config.assignment_rule)
    model = result.model

    cluster_table = [
        ClusterRow(index=c, center_id=comments[int(model.centers[c])].id, size=int(model.sizes[c]))
        for c in range(model.n_clusters)
    ]
    topk_table = topk_membership(model, comments, config.top_k)
    flagged = flag_suspect_clusters(model, scores, config.flag_strategy)

    subreports: Optional[list[SubReport]] = None
    if depth > 0:
        subreports = []
        for cluster in flagged:
            members = model.members(cluster)
            if members.size < config.min_subcluster:
                continue
            sub_comments = [comments[i] for i in members]
            sub_scores = [scores[i] for i in members]
            try:
                sub_report, _ = _detect(sub_comments, sub_scores, config, depth - 1)
            except DegenerateDistancesError:
                # All members share one score; nothing left to separate.
                continue
            subreports.append(SubReport(cluster=cluster, report=sub_report))

    report = DetectionReport(
        cluster_table=cluster_table,
        topk_table=topk_table,
        flagged=flagged,
        subreports=subreports,
        params=config.to_dict(),
    )
    return report, result


def run_detection(comments: list[Comment], lexicon: Lexicon,
                  config: DetectionConfig | None = None) -> DetectionReport:
    """Score the corpus, cluster it, flag suspects, recurse into flags.

    Re-clustering applies the same config to each flagged cluster of at
    least min_subcluster members, up to iterate_depth levels deep.
    """
    report, _ = run_detection_with_graph(comments, lexicon, config)
    return report


def run_detection_with_graph(
    comments: list[Comment], lexicon: Lexicon,
    config: DetectionConfig | None = None,
) -> tuple[DetectionReport, list[tuple]]:
    """run_detection plus the top-level decision-graph rows for export."""
    if config is None:
        config = DetectionConfig()
    if len(comments) < 4:
        raise TooFewPointsError(f"detection needs at least 4 comments, got {len(comments)}")
    scores = score_corpus(comments, lexicon)
    report, result = _detect(comments, scores, config, config.iterate_depth)
    rows = dpc.decision_graph_data(result.stats, result.model)
    return report, rows
