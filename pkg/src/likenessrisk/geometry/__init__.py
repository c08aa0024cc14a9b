"""Monte Carlo geometry: uniform sampling, neighbor search, simulation."""

from .backend import (
    BACKEND,
    COMPILED_AVAILABLE,
    nn_distances_accelerated,
    nn_distances_bruteforce,
)
from .kdtree import KDTree, build_kdtree
from .metric import TOPOLOGIES, pair_distance
from .sampling import sample_points, trial_rng
from .simulate import (
    RankStats,
    SimConfig,
    SimResult,
    nn_to_random_ratio,
    run_simulation,
    theory_comparison,
)

__all__ = [
    "BACKEND",
    "COMPILED_AVAILABLE",
    "KDTree",
    "RankStats",
    "SimConfig",
    "SimResult",
    "TOPOLOGIES",
    "build_kdtree",
    "nn_distances_accelerated",
    "nn_distances_bruteforce",
    "nn_to_random_ratio",
    "pair_distance",
    "run_simulation",
    "sample_points",
    "theory_comparison",
    "trial_rng",
]
