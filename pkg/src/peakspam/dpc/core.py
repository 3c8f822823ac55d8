"""Density-peaks clustering over a condensed DistanceMatrix.

The method ranks every point by local density (rho) and by the distance to
the nearest denser point (delta). Points with outstanding gamma = rho * delta
are the cluster centers: dense themselves and far from anything denser.
Everything here is a pure function of its inputs; the heavy loops run in the
selected kernel backend (compiled or NumPy) and may be sharded across worker
threads without changing a single bit of the output.
"""

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .._util import worker_count
from ..distances import DistanceMatrix
from ..errors import (
    DegenerateDistancesError,
    ParamError,
    ShapeError,
    TooFewPointsError,
)
from ._backend import BACKEND, kernels

KERNELS = ("cutoff", "gaussian")
ASSIGNMENT_RULES = ("nearest_center", "nearest_higher_neighbor")

# Recommended neighbor fraction; other values work but draw a warning.
T_RECOMMENDED = (0.01, 0.02)

# Below this many rows the sharding overhead outweighs any win.
_PARALLEL_MIN_ROWS = 512

# Floor for the jump-ratio denominator when trailing gammas are exactly 0.
GAMMA_EPS = 1e-12


def cutoff_indicator(x: float) -> int:
    """Step function of the cutoff density: 1 when x < 0, else 0."""
    return 1 if x < 0 else 0


@dataclass(frozen=True)
class DensityParams:
    """Cutoff-distance selection: kernel, neighbor fraction t, optional d_c."""

    kernel: str = "cutoff"
    t: float = 0.02
    d_c: float | None = None

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ParamError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        if not 0.0 < self.t < 1.0:
            raise ParamError(f"t must be in (0, 1), got {self.t}")
        if not T_RECOMMENDED[0] <= self.t <= T_RECOMMENDED[1]:
            warnings.warn(
                f"t={self.t} is outside the recommended neighbor fraction "
                f"[{T_RECOMMENDED[0]}, {T_RECOMMENDED[1]}]"
            )
        if self.d_c is not None and not self.d_c > 0.0:
            raise ParamError(f"explicit d_c must be > 0, got {self.d_c}")


@dataclass(frozen=True)
class FixedCenters:
    """Take exactly k centers, the top-k points by gamma."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ParamError(f"center count must be >= 1, got {self.k}")


@dataclass(frozen=True)
class GammaJump:
    """Cut the sorted gamma curve at the first drop of at least `ratio`."""

    ratio: float = 3.0

    def __post_init__(self):
        if not self.ratio > 1.0:
            raise ParamError(f"jump ratio must be > 1, got {self.ratio}")


@dataclass(frozen=True, eq=False)
class PointStats:
    """Per-point rho, delta, gamma and the nearest denser neighbor (-1 = none)."""

    rho: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    nearest_higher: np.ndarray

    @property
    def n(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Chosen centers, per-point cluster index, and cluster sizes."""

    centers: np.ndarray
    assignment: np.ndarray
    sizes: np.ndarray

    @property
    def n_clusters(self) -> int:
        return self.centers.shape[0]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == cluster)


def _shard_rows(kernel_fn, prefix_args: tuple, n: int, out, threads: int) -> None:
    """Run kernel_fn(*prefix_args, start, stop, out) over [0, n) in shards.

    Each row is produced whole inside one call, so the shard layout cannot
    change the result.
    """
    if threads <= 1 or n < _PARALLEL_MIN_ROWS:
        kernel_fn(*prefix_args, 0, n, out)
        return
    bounds = np.linspace(0, n, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(kernel_fn, *prefix_args, int(a), int(b), out)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        for future in futures:
            future.result()


def select_dc(dm: DistanceMatrix, params: DensityParams) -> float:
    """Cutoff distance: the round-half-up(t*M)-th smallest pairwise distance.

    An explicit params.d_c is returned unchanged. Raises
    DegenerateDistancesError when every pair sits at distance zero.
    """
    if params.d_c is not None:
        return float(params.d_c)
    if dm.n < 2:
        raise TooFewPointsError("d_c selection needs at least 2 points")
    ordered = np.sort(dm.condensed)
    if ordered[-1] == 0.0:
        raise DegenerateDistancesError("all pairwise distances are zero")
    m = ordered.shape[0]
    k = int(np.floor(params.t * m + 0.5))
    k = min(max(k, 1), m)
    return float(ordered[k - 1])


def local_density(dm: DistanceMatrix, d_c: float, kernel: str = "cutoff",
                  threads: int | None = None) -> np.ndarray:
    """Per-point density: neighbor count below d_c, or gaussian-weighted sum.

    The cutoff kernel counts strictly-closer points (a pair at exactly d_c
    does not count); the gaussian kernel sums exp(-(d/d_c)^2) over all other
    points.
    """
    if not d_c > 0.0:
        raise ParamError(f"d_c must be > 0, got {d_c}")
    if kernel not in KERNELS:
        raise ParamError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if threads is None:
        threads = worker_count()
    rho = np.empty(dm.n, dtype=np.float64)
    fn = kernels.rho_cutoff if kernel == "cutoff" else kernels.rho_gaussian
    _shard_rows(fn, (dm.condensed, dm.n, d_c), dm.n, rho, threads)
    return rho


def density_order(rho) -> np.ndarray:
    """Indices sorted by descending density; equal densities keep input order."""
    rho = np.asarray(rho, dtype=np.float64)
    return np.argsort(-rho, kind="stable").astype(np.intp)


def compute_delta(dm: DistanceMatrix, order) -> tuple[np.ndarray, np.ndarray]:
    """Distance from each point to its nearest predecessor in density order.

    The order leader gets the maximum distance to any point and a
    nearest_higher of -1; everyone else gets the minimum distance over the
    points ranked before it (ties to the earliest-ranked) and that point's
    index.
    """
    order = np.ascontiguousarray(order, dtype=np.intp)
    if order.shape != (dm.n,) or not np.array_equal(np.sort(order), np.arange(dm.n)):
        raise ParamError("order must be a permutation of 0..n-1")
    if dm.n < 2:
        raise TooFewPointsError("delta needs at least 2 points")
    delta = np.empty(dm.n, dtype=np.float64)
    nearest = np.empty(dm.n, dtype=np.intp)
    kernels.delta_from_order(dm.condensed, dm.n, order, delta, nearest)
    return delta, nearest


def compute_gamma(rho, delta) -> np.ndarray:
    """gamma = rho * delta, elementwise."""
    rho = np.asarray(rho, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    if rho.shape != delta.shape:
        raise ShapeError(f"rho {rho.shape} and delta {delta.shape} differ in length")
    return rho * delta


def point_stats(dm: DistanceMatrix, d_c: float, kernel: str = "cutoff",
                threads: int | None = None) -> PointStats:
    """rho, delta, gamma, and nearest_higher for every point."""
    rho = local_density(dm, d_c, kernel, threads)
    order = density_order(rho)
    delta, nearest = compute_delta(dm, order)
    gamma = compute_gamma(rho, delta)
    return PointStats(rho=rho, delta=delta, gamma=gamma, nearest_higher=nearest)


def _gamma_ranking(gamma: np.ndarray) -> np.ndarray:
    return np.argsort(-gamma, kind="stable").astype(np.intp)


def select_centers(stats: PointStats, mode: FixedCenters | GammaJump) -> np.ndarray:
    """Cluster centers ordered by descending gamma.

    FixedCenters takes the top k. GammaJump scans the sorted gamma curve for
    the first boundary whose drop is at least `ratio` and keeps the prefix;
    if the curve never jumps, it falls back to a single center with a
    warning.
    """
    ranking = _gamma_ranking(stats.gamma)
    gamma_sorted = stats.gamma[ranking]
    n = ranking.shape[0]
    if isinstance(mode, FixedCenters):
        if mode.k > n:
            raise ParamError(f"cannot take {mode.k} centers from {n} points")
        return ranking[: mode.k].copy()
    if isinstance(mode, GammaJump):
        for pos in range(1, n):
            if gamma_sorted[pos - 1] >= mode.ratio * max(gamma_sorted[pos], GAMMA_EPS):
                return ranking[:pos].copy()
        warnings.warn(
            f"gamma curve has no jump of ratio >= {mode.ratio}; falling back to 1 center"
        )
        return ranking[:1].copy()
    raise ParamError(f"unknown center-selection mode {mode!r}")


def assign_points(dm: DistanceMatrix, centers, rule: str = "nearest_center",
                  nearest_higher=None, threads: int | None = None) -> ClusterModel:
    """Partition all points among the given centers.

    nearest_center joins each point to the closest center (ties to the
    earlier-listed one). nearest_higher_neighbor seeds the centers and lets
    every other point inherit the cluster of its nearest denser neighbor,
    which requires the nearest_higher array from compute_delta.
    """
    centers = np.ascontiguousarray(centers, dtype=np.intp)
    if centers.size == 0:
        raise ParamError("need at least one center")
    if np.unique(centers).size != centers.size:
        raise ParamError("duplicate centers")
    if centers.min() < 0 or centers.max() >= dm.n:
        raise ParamError("center index out of range")
    if rule not in ASSIGNMENT_RULES:
        raise ParamError(f"rule must be one of {ASSIGNMENT_RULES}, got {rule!r}")

    assignment = np.empty(dm.n, dtype=np.intp)
    if rule == "nearest_center":
        if threads is None:
            threads = worker_count()
        _shard_rows(
            kernels.assign_nearest_center, (dm.condensed, dm.n, centers),
            dm.n, assignment, threads,
        )
    else:
        if nearest_higher is None:
            raise ParamError("nearest_higher_neighbor rule requires the nearest_higher array")
        nearest_higher = np.asarray(nearest_higher, dtype=np.intp)
        assignment.fill(-1)
        assignment[centers] = np.arange(centers.size, dtype=np.intp)
        for i in range(dm.n):
            if assignment[i] >= 0:
                continue
            path = []
            j = i
            while assignment[j] < 0:
                path.append(j)
                j = int(nearest_higher[j])
                if j < 0:
                    raise ParamError(
                        "density leader is not a center; nearest-higher assignment undefined"
                    )
            assignment[path] = assignment[j]

    sizes = np.bincount(assignment, minlength=centers.size).astype(np.intp)
    return ClusterModel(centers=centers, assignment=assignment, sizes=sizes)


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    """Everything one clustering pass produced."""

    d_c: float
    stats: PointStats
    model: ClusterModel


def cluster_distances(dm: DistanceMatrix, params: DensityParams | None = None,
                      mode: FixedCenters | GammaJump | None = None,
                      rule: str = "nearest_center",
                      threads: int | None = None) -> ClusteringResult:
    """Full pass: d_c, densities, delta/gamma, centers, assignment."""
    if params is None:
        params = DensityParams()
    if mode is None:
        mode = GammaJump()
    d_c = select_dc(dm, params)
    stats = point_stats(dm, d_c, params.kernel, threads)
    centers = select_centers(stats, mode)
    model = assign_points(dm, centers, rule, stats.nearest_higher, threads)
    return ClusteringResult(d_c=d_c, stats=stats, model=model)


def decision_graph_data(stats: PointStats, model: ClusterModel | None = None) -> list[tuple]:
    """Rows (id, rho, delta, gamma, cluster) in input order; -1 = no model."""
    if model is None:
        clusters = np.full(stats.n, -1, dtype=np.intp)
    else:
        clusters = model.assignment
    return [
        (i, float(stats.rho[i]), float(stats.delta[i]), float(stats.gamma[i]), int(clusters[i]))
        for i in range(stats.n)
    ]


def decision_csv_text(rows: list[tuple]) -> str:
    """Decision-graph export: ``id,rho,delta,gamma,cluster``, 6 decimals."""
    lines = ["id,rho,delta,gamma,cluster"]
    for i, rho, delta, gamma, cluster in rows:
        lines.append(f"{i},{rho:.6f},{delta:.6f},{gamma:.6f},{cluster}")
    return "\n".join(lines) + "\n"


def model_json_text(model: ClusterModel, kernel: str, t: float | None,
                    d_c: float, rule: str) -> str:
    """Model export: centers, assignment, sizes, and the run parameters."""
    payload = {
        "centers": [int(c) for c in model.centers],
        "assignment": [int(a) for a in model.assignment],
        "sizes": [int(s) for s in model.sizes],
        "params": {"kernel": kernel, "t": t, "d_c": d_c, "rule": rule},
    }
    return json.dumps(payload, indent=2) + "\n"
