"""Command-line front end.

Subcommands: score (sentiment CSV), cluster (model JSON), decision-graph
(rho/delta/gamma CSV), detect (full report JSON plus decision CSV). Exit
codes: 0 success, 1 usage error, 2 data or runtime error. Output files are
written atomically; a failing run leaves nothing partial behind.
"""

import argparse
import sys
from pathlib import Path

from . import __version__, dpc
from ._util import atomic_write_text
from .errors import PeakspamError
from .ingest import load_comments
from .pipeline import (
    DetectionConfig,
    ExtremeSentiment,
    TopkDominance,
    report_json_text,
    run_detection_with_graph,
)
from .sentiment import (
    load_lexicon,
    pairwise_distances,
    score_corpus,
    scores_csv_text,
    total_polarities,
)

_RULES = {"nearest-center": "nearest_center", "nearest-higher": "nearest_higher_neighbor"}


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _iterate_depth(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= 3:
        raise argparse.ArgumentTypeError(f"must be in [0, 3], got {text}")
    return value


def _centers(text: str):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"center count must be >= 1, got {text}")
    return value


def _infer_format(path: str) -> str:
    return "jsonl" if Path(path).suffix.lower() == ".jsonl" else "csv"


def _add_clustering_flags(parser: argparse.ArgumentParser, with_centers_default) -> None:
    parser.add_argument("--t", type=_fraction, default=0.02,
                        help="neighbor fraction for the cutoff distance (default 0.02)")
    parser.add_argument("--kernel", choices=dpc.KERNELS, default="cutoff")
    parser.add_argument("--centers", type=_centers, default=with_centers_default,
                        help="'auto' (gamma-jump heuristic) or a fixed count")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="peakspam",
                     description="Screen review corpora for coordinated fake comments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p_score = sub.add_parser("score", help="write per-comment sentiment scores as CSV")
    p_score.add_argument("--input", required=True)
    p_score.add_argument("--format", choices=("csv", "jsonl"), default=None,
                         help="input format (default: by file extension)")
    p_score.add_argument("--lexicon", required=True)
    p_score.add_argument("--output", required=True)
    p_score.set_defaults(handler=cmd_score)

    p_cluster = sub.add_parser("cluster", help="cluster scored comments, write model JSON")
    p_cluster.add_argument("--input", required=True)
    p_cluster.add_argument("--lexicon", required=True)
    _add_clustering_flags(p_cluster, "auto")
    p_cluster.add_argument("--rule", choices=sorted(_RULES), default="nearest-center")
    p_cluster.add_argument("--output", required=True)
    p_cluster.set_defaults(handler=cmd_cluster)

    p_graph = sub.add_parser("decision-graph",
                             help="write per-point rho/delta/gamma CSV for plotting")
    p_graph.add_argument("--input", required=True)
    p_graph.add_argument("--lexicon", required=True)
    _add_clustering_flags(p_graph, None)
    p_graph.add_argument("--output", required=True)
    p_graph.set_defaults(handler=cmd_decision_graph)

    p_detect = sub.add_parser("detect", help="full pipeline: report JSON + decision CSV")
    p_detect.add_argument("--input", required=True)
    p_detect.add_argument("--lexicon", required=True)
    _add_clustering_flags(p_detect, "auto")
    p_detect.add_argument("--rule", choices=sorted(_RULES), default="nearest-center")
    p_detect.add_argument("--strategy", choices=("extreme-sentiment", "topk-dominance"),
                          default="extreme-sentiment")
    p_detect.add_argument("--top-k", type=_positive_int, default=20, dest="top_k")
    p_detect.add_argument("--iterate", type=_iterate_depth, default=1)
    p_detect.add_argument("--report", required=True)
    p_detect.set_defaults(handler=cmd_detect)

    return parser


def cmd_score(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    fmt = args.format or _infer_format(args.input)
    comments = load_comments(args.input, fmt)
    scores = score_corpus(comments, lexicon)
    atomic_write_text(args.output, scores_csv_text(scores, [c.id for c in comments]))
    totals = total_polarities(scores)
    print(
        f"scored {len(comments)} comments; total_polarity range "
        f"[{totals.min():.6f}, {totals.max():.6f}]",
        file=sys.stderr,
    )
    return 0


def _load_and_score(args):
    lexicon = load_lexicon(args.lexicon)
    comments = load_comments(args.input, _infer_format(args.input))
    scores = score_corpus(comments, lexicon)
    return comments, scores


def _center_mode(centers):
    return dpc.GammaJump() if centers == "auto" else dpc.FixedCenters(centers)


def cmd_cluster(args) -> int:
    comments, scores = _load_and_score(args)
    dm = pairwise_distances(scores)
    params = dpc.DensityParams(kernel=args.kernel, t=args.t)
    result = dpc.cluster_distances(dm, params, _center_mode(args.centers), _RULES[args.rule])
    text = dpc.model_json_text(result.model, kernel=args.kernel, t=args.t,
                               d_c=result.d_c, rule=_RULES[args.rule])
    atomic_write_text(args.output, text)
    sizes = ", ".join(str(int(s)) for s in result.model.sizes)
    print(f"{result.model.n_clusters} cluster(s) over {dm.n} comments; sizes: {sizes}",
          file=sys.stderr)
    return 0


def cmd_decision_graph(args) -> int:
    comments, scores = _load_and_score(args)
    dm = pairwise_distances(scores)
    params = dpc.DensityParams(kernel=args.kernel, t=args.t)
    if args.centers is None:
        d_c = dpc.select_dc(dm, params)
        stats = dpc.point_stats(dm, d_c, args.kernel)
        rows = dpc.decision_graph_data(stats, None)
    else:
        result = dpc.cluster_distances(dm, params, _center_mode(args.centers))
        rows = dpc.decision_graph_data(result.stats, result.model)
    atomic_write_text(args.output, dpc.decision_csv_text(rows))
    print(f"wrote decision-graph data for {dm.n} comments", file=sys.stderr)
    return 0


def cmd_detect(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    comments = load_comments(args.input, _infer_format(args.input))
    if args.strategy == "extreme-sentiment":
        strategy = ExtremeSentiment()
    else:
        strategy = TopkDominance(k=args.top_k)
    config = DetectionConfig(
        t=args.t,
        kernel=args.kernel,
        center_mode=_center_mode(args.centers),
        assignment_rule=_RULES[args.rule],
        flag_strategy=strategy,
        iterate_depth=args.iterate,
        top_k=args.top_k,
    )
    report, rows = run_detection_with_graph(comments, lexicon, config)
    atomic_write_text(args.report, report_json_text(report))
    decision_path = Path(args.report).with_suffix(".decision.csv")
    atomic_write_text(decision_path, dpc.decision_csv_text(rows))
    if report.flagged:
        by_index = {row.index: row for row in report.cluster_table}
        summary = "; ".join(
            f"cluster {c} (center {by_index[c].center_id}, size {by_index[c].size})"
            for c in report.flagged
        )
        print(f"flagged {len(report.flagged)} of {len(report.cluster_table)} cluster(s): {summary}",
              file=sys.stderr)
    else:
        print(f"flagged 0 of {len(report.cluster_table)} cluster(s)", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except PeakspamError as exc:
        print(f"peakspam: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"peakspam: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
