"""Independent brute-force oracles used by the tests.

The spanning-tree oracle enumerates every labeled tree on n vertices via
Prufer sequences (vectorized decode), so it shares no code path with the
MST builders it checks.
"""

import numpy as np
from scipy.spatial.distance import pdist, squareform


def all_spanning_tree_weights(points: np.ndarray) -> np.ndarray:
    """Total weights of all n^(n-2) labeled spanning trees."""
    n = len(points)
    dist = squareform(pdist(points))
    if n == 2:
        return np.array([dist[0, 1]])
    n_seq = n ** (n - 2)
    codes = np.arange(n_seq)
    seq = np.empty((n_seq, n - 2), dtype=np.int64)
    for j in range(n - 2):
        codes, seq[:, j] = np.divmod(codes, n)

    degree = np.ones((n_seq, n), dtype=np.int16)
    np.add.at(degree, (np.arange(n_seq)[:, None], seq), 1)
    rows = np.arange(n_seq)
    total = np.zeros(n_seq)
    for j in range(n - 2):
        leaf = np.argmax(degree == 1, axis=1)
        a = seq[:, j]
        total += dist[leaf, a]
        degree[rows, leaf] -= 1
        degree[rows, a] -= 1
    # join the last two degree-1 vertices
    first = np.argmax(degree == 1, axis=1)
    degree[rows, first] -= 1
    second = np.argmax(degree == 1, axis=1)
    total += dist[first, second]
    return total


def min_spanning_tree_weight(points: np.ndarray) -> float:
    return float(all_spanning_tree_weights(points).min())
