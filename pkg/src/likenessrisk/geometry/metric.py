"""Distance metric on the unit cube and unit torus."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["TOPOLOGIES", "check_topology", "pair_distance"]

TOPOLOGIES = ("torus", "cube")


def check_topology(topology: str) -> str:
    if topology not in TOPOLOGIES:
        raise ValueError(f"topology must be one of {TOPOLOGIES}, got {topology!r}")
    return topology


def pair_distance(a, b, topology: str = "torus") -> float:
    """Euclidean distance between two points in [0, 1)^D.

    Under the torus each coordinate difference d is replaced by the
    minimum-image value min(|d|, 1 - |d|).
    """
    check_topology(topology)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"points must share one dimensionality, got shapes {a.shape} and {b.shape}")
    # Sequential per-coordinate accumulation, matching the search kernels
    # bit for bit (summation order changes the last ulp).
    wrap = topology == "torus"
    d2 = 0.0
    for k in range(a.shape[0]):
        delta = abs(float(a[k]) - float(b[k]))
        if wrap and delta > 0.5:
            delta = 1.0 - delta
        d2 += delta * delta
    return math.sqrt(d2)
