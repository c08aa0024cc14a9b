"""Shared kd-tree construction for the accelerated neighbor search.

The tree is built once per point set (in NumPy) and traversed by whichever
kernel backend is active, compiled or pure Python. Keeping the build in one
place guarantees both backends walk an identical tree; combined with shared
distance arithmetic this makes their outputs bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["KDTree", "build_kdtree", "LEAF_SIZE"]

#: Points per leaf before a node stops splitting; 16 benchmarked fastest
#: across the supported dimensions (see benchmarks/bench_kernels.py).
LEAF_SIZE = 16


@dataclass
class KDTree:
    points: np.ndarray  # (N, D) float64, permuted into tree order
    index: np.ndarray   # (N,) int64, original index of each permuted row
    left: np.ndarray    # (M,) int64, child node id or -1 for leaves
    right: np.ndarray   # (M,) int64
    start: np.ndarray   # (M,) int64, permuted-row range covered by the node
    end: np.ndarray     # (M,) int64
    box_lo: np.ndarray  # (M, D) float64, tight bounding box of the node
    box_hi: np.ndarray  # (M, D) float64

    @property
    def n_nodes(self) -> int:
        return self.left.shape[0]


def build_kdtree(points, leaf_size: int = LEAF_SIZE) -> KDTree:
    """Median-split kd-tree over ``points`` (never mutated; copied).

    Splits on the widest dimension of each node's tight bounding box. Nodes
    whose points are all identical stay leaves regardless of size, so heavily
    duplicated inputs cannot recurse forever.
    """
    pts = np.array(points, dtype=np.float64, order="C", copy=True)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError(f"points must be a non-empty (N, D) array, got shape {pts.shape}")
    n = pts.shape[0]
    index = np.arange(n, dtype=np.int64)

    left: list[int] = []
    right: list[int] = []
    start: list[int] = []
    end: list[int] = []
    box_lo: list[np.ndarray] = []
    box_hi: list[np.ndarray] = []

    def build(s: int, e: int) -> int:
        seg = pts[s:e]
        lo = seg.min(axis=0)
        hi = seg.max(axis=0)
        node = len(left)
        left.append(-1)
        right.append(-1)
        start.append(s)
        end.append(e)
        box_lo.append(lo)
        box_hi.append(hi)
        count = e - s
        if count > leaf_size:
            spread = hi - lo
            dim = int(np.argmax(spread))
            if spread[dim] > 0.0:
                half = count // 2
                order = np.argpartition(seg[:, dim], half)
                pts[s:e] = seg[order]
                index[s:e] = index[s:e][order]
                left[node] = build(s, s + half)
                right[node] = build(s + half, e)
        return node

    build(0, n)
    return KDTree(
        points=pts,
        index=index,
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        start=np.asarray(start, dtype=np.int64),
        end=np.asarray(end, dtype=np.int64),
        box_lo=np.ascontiguousarray(np.vstack(box_lo)),
        box_hi=np.ascontiguousarray(np.vstack(box_hi)),
    )
