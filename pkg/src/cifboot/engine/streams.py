"""Reproducible random streams for parallel resampling.

Every replicate gets its own generator derived from the master seed and an
integer key, so results never depend on scheduling or thread count.
"""

import numpy as np


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, key).

    Args:
        seed: Non-negative master seed
        *key: Integers identifying the stream, e.g. (replicate,) or
            (replicate, group)

    Returns:
        Independent PCG64 generator
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(sequence))


def describe_streams(seed: int, prefix: tuple[int, ...], reps: int, groups: int = 0) -> dict:
    """JSON-friendly description of the streams used for a run."""
    return {
        "generator": "PCG64",
        "seed": seed,
        "key_prefix": list(prefix),
        "replicates": reps,
        "key": "prefix + (replicate,)" if groups == 0 else "prefix + (replicate, group)",
    }
