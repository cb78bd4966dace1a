"""
Seeded random streams for RZF-SKETCH

Every stochastic operation draws from a numpy ``Generator`` backed by the
counter-based Philox bit generator. Trial streams are children of a master
``SeedSequence``; each child is condensed into one 64-bit trial seed that is
written next to the trial's results, so any single trial can be replayed with
``make_rng(trial_seed, ...)`` alone.
"""

from typing import List

import numpy as np

BIT_GENERATOR = "numpy.Philox-4x64"


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """
    Build a Philox generator for ``seed`` and an optional spawn path.

    Distinct paths give statistically independent streams for the same seed.

    Args:
        seed: Non-negative integer seed
        *path: Spawn key selecting a sub-stream

    Returns:
        Seeded generator
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(sequence))


def trial_seeds(master_seed: int, count: int) -> List[int]:
    """
    One 64-bit seed per trial, derived from spawned children of ``master_seed``.

    Args:
        master_seed: Experiment master seed
        count: Number of trials

    Returns:
        List of trial seeds, stable for a given master seed
    """
    children = np.random.SeedSequence(int(master_seed)).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]
