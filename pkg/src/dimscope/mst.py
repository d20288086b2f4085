"""Exact Euclidean minimum spanning trees and the two tree statistics.

Both dimension estimators consume the tree built here: the edge-power sum
(sum of edge lengths to a power) and the mean squared vertex degree.
"""

from dataclasses import dataclass

import numpy as np

from ._mst_kernels import boruvka_mst, prim_mst
from .core import InvalidArgumentError, PointCloud

# Boruvka + k-d tree wins for large low-dimensional clouds; Prim wins
# otherwise (k-d trees degrade with embedding dimension).
_BORUVKA_MAX_D = 8
_BORUVKA_MIN_N = 1024


@dataclass(frozen=True)
class MinimumSpanningTree:
    """Edge list (u, v, weight) of the exact Euclidean MST.

    Edges are stored in canonical (weight, min index, max index) order
    with u < v, so equal trees compare equal regardless of build path.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray
    source_meta: dict

    @property
    def edges(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.weights.tolist()))

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.u, minlength=self.n)
        deg += np.bincount(self.v, minlength=self.n)
        return deg


def build_emst(cloud: PointCloud, method: str = "auto") -> MinimumSpanningTree:
    """Exact EMST of the cloud.

    ``method`` is 'auto', 'prim' (O(n^2) baseline) or 'boruvka'
    (dual-tree path over a k-d index).  Duplicate points yield zero-weight
    edges, which are kept.
    """
    if cloud.n < 2:
        raise InvalidArgumentError(f"EMST needs n >= 2, got {cloud.n}")
    if method == "auto":
        method = (
            "boruvka"
            if cloud.d <= _BORUVKA_MAX_D and cloud.n >= _BORUVKA_MIN_N
            else "prim"
        )
    if method == "prim":
        us, vs, w2 = prim_mst(cloud.points)
    elif method == "boruvka":
        us, vs, w2 = boruvka_mst(cloud.points)
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")
    u = np.minimum(us, vs)
    v = np.maximum(us, vs)
    w = np.sqrt(w2)
    order = np.lexsort((v, u, w))
    u, v, w = u[order], v[order], w[order]
    for arr in (u, v, w):
        arr.setflags(write=False)
    deg = np.bincount(u, minlength=cloud.n) + np.bincount(v, minlength=cloud.n)
    assert deg.sum() == 2 * (cloud.n - 1), "handshake identity violated"
    meta = {"n": cloud.n, "d": cloud.d, "method": method}
    return MinimumSpanningTree(cloud.n, u, v, w, meta)


def edge_power_sum(tree: MinimumSpanningTree, alpha: float) -> float:
    """Sum over MST edges of weight**alpha; zero-weight edges contribute 0."""
    alpha = float(alpha)
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    w = tree.weights
    pos = w > 0
    return float(np.power(w[pos], alpha).sum())


def degree_statistic(tree: MinimumSpanningTree) -> float:
    """Mean squared vertex degree, (1/n) * sum deg(i)^2."""
    deg = tree.degrees().astype(np.float64)
    return float((deg * deg).sum() / tree.n)
