"""Condensed pairwise distance storage.

An N-point symmetric distance matrix with a zero diagonal is stored as the
M = N(N-1)/2 upper-triangle entries in row-major pair order: (0,1), (0,2),
..., (0,N-1), (1,2), ... Index helpers below map between pair (i, j) and the
flat position, matching scipy's pdist layout.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import ShapeError, TooFewPointsError


def condensed_size(n: int) -> int:
    return n * (n - 1) // 2


def condensed_index(n: int, i: int, j: int) -> int:
    """Flat position of pair (i, j), i != j, in the condensed layout."""
    if i == j:
        raise ShapeError("condensed storage has no diagonal entries")
    if i > j:
        i, j = j, i
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def pair_indices_for_point(n: int, i: int) -> np.ndarray:
    """Condensed positions of every pair involving point i, partner ascending.

    Returns n-1 indices: pairs (0,i)...(i-1,i) followed by (i,i+1)...(i,n-1),
    so gathering with them yields point i's distance row without the diagonal.
    """
    out = np.empty(n - 1, dtype=np.intp)
    if i > 0:
        j = np.arange(i, dtype=np.intp)
        out[:i] = n * j - j * (j + 1) // 2 + (i - j - 1)
    if i < n - 1:
        start = n * i - i * (i + 1) // 2
        out[i:] = np.arange(start, start + (n - 1 - i), dtype=np.intp)
    return out


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric non-negative pairwise distances over n points, condensed."""

    n: int
    condensed: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.condensed, dtype=np.float64)
        object.__setattr__(self, "condensed", arr)
        if self.n < 1:
            raise ShapeError(f"point count must be >= 1, got {self.n}")
        expected = condensed_size(self.n)
        if arr.ndim != 1 or arr.shape[0] != expected:
            raise ShapeError(
                f"condensed length {arr.shape} does not match n={self.n} (expected {expected})"
            )
        if expected and not np.all(arr >= 0.0):
            raise ShapeError("distances must be non-negative and not NaN")

    @classmethod
    def from_1d(cls, values) -> "DistanceMatrix":
        """Absolute-difference distances |v_i - v_j| over 1-D coordinates."""
        vec = np.asarray(values, dtype=np.float64).reshape(-1, 1)
        if vec.shape[0] < 2:
            raise TooFewPointsError(f"need at least 2 points, got {vec.shape[0]}")
        return cls(n=vec.shape[0], condensed=pdist(vec, metric="cityblock"))

    def pair(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        return float(self.condensed[condensed_index(self.n, i, j)])

    def row(self, i: int) -> np.ndarray:
        """Distances from point i to all points, including the zero diagonal."""
        out = np.empty(self.n, dtype=np.float64)
        others = self.condensed[pair_indices_for_point(self.n, i)]
        out[:i] = others[:i]
        out[i] = 0.0
        out[i + 1:] = others[i:]
        return out

    def square(self) -> np.ndarray:
        """Full n-by-n matrix (O(n^2) memory; used by the fallback kernels)."""
        return squareform(self.condensed, checks=False)
