"""Deterministic per-trial point sampling.

Each trial draws from its own Philox substream: the counter-based generator is
keyed with the experiment seed and jumped to ``trial_index * 2**64`` draws, so
a trial's points depend only on (seed, trial_index) — never on how many other
trials ran before it, in what order, or on how many threads.
"""

from __future__ import annotations

import numpy as np

__all__ = ["trial_rng", "sample_points"]

# Each trial owns a disjoint 2**64-draw slice of the Philox counter space.
_TRIAL_STRIDE = 1 << 64


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Generator for one trial's private substream."""
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(trial_index * _TRIAL_STRIDE)
    return np.random.Generator(bitgen)


def sample_points(config, trial_index: int) -> np.ndarray:
    """N uniform points in [0, 1)^D for one trial, shape (N, D) float64.

    Bit-identical for identical (config.seed, trial_index) regardless of
    execution order or thread count.
    """
    if not 0 <= trial_index < config.trials:
        raise ValueError(
            f"trial_index must be in [0, {config.trials}), got {trial_index}"
        )
    rng = trial_rng(config.seed, trial_index)
    return rng.random((config.N, config.D), dtype=np.float64)
