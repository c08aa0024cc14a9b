"""Kernel backend selection and the public neighbor-search operations.

The compiled extension is preferred when importable; otherwise the NumPy
fallback takes over. Both implement identical arithmetic, so results do not
depend on which backend ran. Set ``LIKENESSRISK_BACKEND=python`` to force the
fallback (used by the benchmark and the cross-backend tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .kdtree import build_kdtree
from .metric import check_topology

__all__ = [
    "BACKEND",
    "COMPILED_AVAILABLE",
    "nn_distances_bruteforce",
    "nn_distances_accelerated",
]

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

COMPILED_AVAILABLE = _compiled is not None

if os.environ.get("LIKENESSRISK_BACKEND", "").lower() == "python":
    BACKEND = "python"
elif COMPILED_AVAILABLE:
    BACKEND = "compiled"
else:
    BACKEND = "python"


def _resolve_backend(backend: str | None) -> str:
    if backend is None:
        return BACKEND
    if backend not in ("compiled", "python"):
        raise ValueError(f"backend must be 'compiled' or 'python', got {backend!r}")
    if backend == "compiled" and not COMPILED_AVAILABLE:
        raise RuntimeError("compiled kernels are not available in this installation")
    return backend


def _check_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] < 1:
        raise ValueError(f"points must be an (N>=2, D>=1) array, got shape {pts.shape}")
    return pts


def _check_max_rank(max_rank: int, n: int) -> int:
    if max_rank != int(max_rank) or not 1 <= int(max_rank) < n:
        raise ValueError(f"max_rank must satisfy 1 <= max_rank < N={n}, got {max_rank!r}")
    return int(max_rank)


def nn_distances_bruteforce(points, max_rank: int, topology: str = "torus",
                            *, backend: str | None = None) -> np.ndarray:
    """Per-point sorted distances to the ``max_rank`` nearest neighbors.

    O(N^2) reference implementation; row i holds the rank 1..max_rank
    distances of point i. Ties (e.g. duplicated points) are legal input.
    """
    check_topology(topology)
    pts = _check_points(points)
    k = _check_max_rank(max_rank, pts.shape[0])
    wrap = topology == "torus"
    if _resolve_backend(backend) == "compiled":
        return _compiled.brute_force_ranks(pts, k, wrap)
    return _kernels_py.brute_force_ranks(pts, k, wrap)


def nn_distances_accelerated(points, max_rank: int, topology: str = "torus",
                             *, backend: str | None = None) -> np.ndarray:
    """kd-tree neighbor search; identical input/output contract to brute force.

    Periodic images are handled explicitly in the box bounds under the torus.
    Output matches :func:`nn_distances_bruteforce` exactly, distance for
    distance.
    """
    check_topology(topology)
    pts = _check_points(points)
    k = _check_max_rank(max_rank, pts.shape[0])
    wrap = topology == "torus"
    tree = build_kdtree(pts)
    if _resolve_backend(backend) == "compiled":
        return _compiled.kdtree_ranks(
            tree.points, tree.index, tree.left, tree.right,
            tree.start, tree.end, tree.box_lo, tree.box_hi, k, wrap,
        )
    return _kernels_py.kdtree_ranks(tree, k, wrap)
