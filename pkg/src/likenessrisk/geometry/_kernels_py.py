"""NumPy fallback neighbor-search kernels.

Mirrors the compiled kernels operation for operation: coordinate deltas are
folded (minimum image), squared and accumulated dimension by dimension in the
same order, so both backends produce bit-identical distances.
"""

from __future__ import annotations

import heapq

import numpy as np

from .kdtree import KDTree

__all__ = ["brute_force_ranks", "kdtree_ranks"]

# Rows per block in the brute-force scan; bounds scratch memory at ~32 MB
# for the largest supported point sets.
_BLOCK_ENTRIES = 4_000_000


def brute_force_ranks(points: np.ndarray, max_rank: int, wrap: bool) -> np.ndarray:
    """Sorted distances to the ``max_rank`` nearest neighbors of every point.

    O(N^2) reference implementation; result row i corresponds to point i.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n, dims = pts.shape
    out = np.empty((n, max_rank), dtype=np.float64)
    rows = max(1, _BLOCK_ENTRIES // n)
    for s in range(0, n, rows):
        e = min(n, s + rows)
        d2 = np.zeros((e - s, n))
        for k in range(dims):
            delta = np.abs(pts[s:e, k, None] - pts[None, :, k])
            if wrap:
                np.minimum(delta, 1.0 - delta, out=delta)
            d2 += delta * delta
        dist = np.sqrt(d2)
        dist[np.arange(e - s), np.arange(s, e)] = np.inf  # exclude self
        dist.sort(axis=1)
        out[s:e] = dist[:, :max_rank]
    return out


def _box_bound2(x: np.ndarray, lo: np.ndarray, hi: np.ndarray, wrap: bool) -> float:
    """Lower bound on the squared distance from ``x`` to any point in a box.

    Under the torus the nearest image of each coordinate is considered; with
    points in [0, 1) the +1 image always lies right of the box and the -1
    image left of it.
    """
    d = np.maximum(np.maximum(lo - x, x - hi), 0.0)
    if wrap:
        d = np.minimum(d, np.minimum((x + 1.0) - hi, (lo + 1.0) - x))
    return float(np.dot(d, d))


def _query_one(tree: KDTree, q: int, k: int, wrap: bool) -> np.ndarray:
    """k nearest distances for permuted row q, excluding the point itself."""
    x = tree.points[q]
    # Max-heap of the k smallest squared distances, stored negated for heapq.
    heap: list[float] = []
    stack = [(0, _box_bound2(x, tree.box_lo[0], tree.box_hi[0], wrap))]
    while stack:
        node, bound2 = stack.pop()
        # Strict > keeps boxes whose bound ties the current k-th distance:
        # they can only contribute equal values, never different ones.
        if len(heap) == k and bound2 > -heap[0]:
            continue
        child = tree.left[node]
        if child < 0:
            s, e = tree.start[node], tree.end[node]
            block = tree.points[s:e]
            d2 = np.zeros(e - s)
            for dim in range(block.shape[1]):
                delta = np.abs(block[:, dim] - x[dim])
                if wrap:
                    delta = np.minimum(delta, 1.0 - delta)
                d2 += delta * delta
            for j in range(e - s):
                if s + j == q:
                    continue
                v = d2[j]
                if len(heap) < k:
                    heapq.heappush(heap, -v)
                elif v < -heap[0]:
                    heapq.heapreplace(heap, -v)
        else:
            other = tree.right[node]
            bl = _box_bound2(x, tree.box_lo[child], tree.box_hi[child], wrap)
            br = _box_bound2(x, tree.box_lo[other], tree.box_hi[other], wrap)
            if bl <= br:  # visit the nearer child first
                stack.append((other, br))
                stack.append((child, bl))
            else:
                stack.append((child, bl))
                stack.append((other, br))
    return np.sqrt(np.sort(np.negative(heap)))


def kdtree_ranks(tree: KDTree, max_rank: int, wrap: bool) -> np.ndarray:
    """kd-tree neighbor search; same contract and output as brute force."""
    n = tree.points.shape[0]
    out = np.empty((n, max_rank), dtype=np.float64)
    for q in range(n):
        out[tree.index[q]] = _query_one(tree, q, max_rank, wrap)
    return out
