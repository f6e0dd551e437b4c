"""Seeded random substreams, so results do not depend on worker counts."""
import numpy as np

from setgrad.exceptions import InputError


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Generator for the substream (seed, *indices)."""
    if seed < 0 or any(index < 0 for index in indices):
        raise InputError(f"seeds and stream indices must be >= 0, got {(seed,) + indices}")
    return np.random.default_rng([int(seed), *(int(index) for index in indices)])


def derive_seed(seed: int, index: int) -> int:
    """Child seed for iteration ``index`` of a run seeded with ``seed``."""
    if seed < 0 or index < 0:
        raise InputError(f"seeds and stream indices must be >= 0, got {(seed, index)}")
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1, dtype=np.uint32)[0])
