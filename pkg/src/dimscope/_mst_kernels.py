"""Hot kernels for exact Euclidean MST construction.

Two interchangeable Prim implementations (numba-compiled and pure numpy)
plus a dual spatial-index path: Boruvka rounds over a scipy cKDTree.
All paths produce the same total weight and weight multiset; ties are
broken by the lexicographic (weight, min index, max index) order.
"""

import numpy as np
from scipy.spatial import cKDTree

from . import backend

# ---------------------------------------------------------------------------
# Prim, O(n^2 d): the baseline and the high-dimensional workhorse.
# Tie-breaking: the sequential argmin scan keeps the lowest candidate index,
# and the strict '<' in the update keeps the earliest tree vertex.

_prim_numba = None


def _get_prim_numba():
    global _prim_numba
    if _prim_numba is None:
        from numba import njit, prange

        @njit(parallel=True, cache=True)
        def prim(points):  # pragma: no cover - exercised via dispatch
            n, d = points.shape
            dist = np.full(n, np.inf)
            nearest = np.zeros(n, np.int64)
            in_tree = np.zeros(n, np.bool_)
            us = np.empty(n - 1, np.int64)
            vs = np.empty(n - 1, np.int64)
            w2 = np.empty(n - 1, np.float64)
            in_tree[0] = True
            cur = 0
            for it in range(n - 1):
                for j in prange(n):
                    if not in_tree[j]:
                        s = 0.0
                        for k in range(d):
                            diff = points[cur, k] - points[j, k]
                            s += diff * diff
                        if s < dist[j]:
                            dist[j] = s
                            nearest[j] = cur
                best = -1
                bw = np.inf
                for j in range(n):
                    if not in_tree[j] and dist[j] < bw:
                        bw = dist[j]
                        best = j
                in_tree[best] = True
                us[it] = nearest[best]
                vs[it] = best
                w2[it] = bw
                cur = best
            return us, vs, w2

        _prim_numba = prim
    return _prim_numba


def _prim_numpy(points):
    n = points.shape[0]
    dist = np.full(n, np.inf)
    nearest = np.zeros(n, np.int64)
    us = np.empty(n - 1, np.int64)
    vs = np.empty(n - 1, np.int64)
    w2 = np.empty(n - 1, np.float64)
    dist[0] = -np.inf  # marks membership; never selected again
    cur = 0
    for it in range(n - 1):
        diff = points - points[cur]
        d2 = np.einsum("ij,ij->i", diff, diff)
        closer = d2 < dist
        dist[closer] = d2[closer]
        nearest[closer] = cur
        best = int(np.argmin(np.where(np.isneginf(dist), np.inf, dist)))
        us[it] = nearest[best]
        vs[it] = best
        w2[it] = dist[best]
        dist[best] = -np.inf
        cur = best
    return us, vs, w2


def prim_mst(points: np.ndarray):
    """Exact MST edges (u, v, squared weight) via Prim's algorithm."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if backend.use_numba():
        return _get_prim_numba()(points)
    return _prim_numpy(points)


# ---------------------------------------------------------------------------
# Boruvka over a k-d tree: fast for low embedding dimension and large n.


def _find(root, i):
    while root[i] != i:
        root[i] = root[root[i]]
        i = root[i]
    return i


def boruvka_mst(points: np.ndarray):
    """Exact MST edges (u, v, squared weight) via k-d-tree Boruvka rounds.

    Each round every component contributes its minimal outgoing edge under
    the total order (weight, min index, max index), which yields the unique
    MST for that order.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    kdtree = cKDTree(points)
    root = np.arange(n)
    us, vs, w2s = [], [], []
    n_edges = 0
    idx_all = np.arange(n)
    while n_edges < n - 1:
        comp = np.array([_find(root, i) for i in range(n)])
        cand_j = np.full(n, -1, dtype=np.int64)
        cand_w2 = np.full(n, np.inf)
        comp_ids = np.unique(comp)
        if comp_ids.size <= 32:
            # few, large components: query each against a tree of its
            # complement instead of chasing huge k-NN lists
            for c in comp_ids:
                mask = comp == c
                members = idx_all[mask]
                others = idx_all[~mask]
                dd, jj = cKDTree(points[others]).query(points[members], k=1)
                cand_j[members] = others[jj]
                cand_w2[members] = dd**2
        else:
            pending = idx_all
            k = 2
            while pending.size:
                k = min(k, n)
                dd, ii = kdtree.query(points[pending], k=k)
                if k == 1:
                    dd = dd[:, None]
                    ii = ii[:, None]
                other = comp[ii] != comp[pending][:, None]
                has = other.any(axis=1)
                first = np.argmax(other, axis=1)
                rows = np.nonzero(has)[0]
                sel = pending[rows]
                cand_j[sel] = ii[rows, first[rows]]
                cand_w2[sel] = dd[rows, first[rows]] ** 2
                pending = pending[~has]
                if k >= n:
                    break
                k *= 2
        valid = cand_j >= 0
        i_idx = idx_all[valid]
        j_idx = cand_j[valid]
        w2 = cand_w2[valid]
        umin = np.minimum(i_idx, j_idx)
        umax = np.maximum(i_idx, j_idx)
        order = np.lexsort((umax, umin, w2))
        # first edge per component in (w, umin, umax) order
        _, first_pos = np.unique(comp[i_idx[order]], return_index=True)
        for t in order[np.sort(first_pos)]:
            ru = _find(root, int(i_idx[t]))
            rv = _find(root, int(j_idx[t]))
            if ru != rv:
                root[ru] = rv
                us.append(int(i_idx[t]))
                vs.append(int(j_idx[t]))
                w2s.append(float(w2[t]))
                n_edges += 1
    return (
        np.array(us, dtype=np.int64),
        np.array(vs, dtype=np.int64),
        np.array(w2s, dtype=np.float64),
    )
