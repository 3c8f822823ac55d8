"""Pure-NumPy kernels, the fallback when the compiled extension is absent.

Signatures mirror _kernels_cy. Row-range arguments let the caller shard work
across threads; every row is computed whole within one call, so results are
bitwise identical no matter how the range is chunked.
"""

import numpy as np
from scipy.spatial.distance import squareform

from ..distances import pair_indices_for_point


def rho_cutoff(condensed, n, d_c, start, stop, out):
    """out[i] = number of other points strictly closer than d_c, per row."""
    for i in range(start, stop):
        row = condensed[pair_indices_for_point(n, i)]
        out[i] = np.count_nonzero(row < d_c)


def rho_gaussian(condensed, n, d_c, start, stop, out):
    """out[i] = sum over j != i of exp(-(d_ij / d_c)^2), per row."""
    for i in range(start, stop):
        row = condensed[pair_indices_for_point(n, i)]
        scaled = row / d_c
        out[i] = np.exp(-(scaled * scaled)).sum()


def delta_from_order(condensed, n, order, delta_out, nearest_out):
    """Distance to the nearest point earlier in the density order.

    The order leader instead gets its maximum distance to any point and a
    nearest index of -1. Ties pick the earliest-ordered point, matching
    argmin's first-occurrence rule. Builds the full n*n matrix (O(n^2)
    memory); the compiled kernel works from condensed storage directly.
    """
    full = squareform(condensed, checks=False)
    permuted = full[np.ix_(order, order)]
    permuted[np.triu_indices(n)] = np.inf
    min_pos = permuted.argmin(axis=1)
    delta_ordered = permuted[np.arange(n), min_pos]
    delta_out[order[1:]] = delta_ordered[1:]
    nearest_out[order[1:]] = order[min_pos[1:]]
    leader = order[0]
    delta_out[leader] = full[leader].max()
    nearest_out[leader] = -1


def assign_nearest_center(condensed, n, centers, start, stop, out):
    """out[i] = position (in `centers`) of the nearest center to point i.

    Ties go to the earliest-listed center.
    """
    block = np.empty((len(centers), stop - start), dtype=np.float64)
    for pos, center in enumerate(centers):
        row = np.empty(n, dtype=np.float64)
        others = condensed[pair_indices_for_point(n, center)]
        row[:center] = others[:center]
        row[center] = 0.0
        row[center + 1:] = others[center:]
        block[pos] = row[start:stop]
    out[start:stop] = block.argmin(axis=0)
