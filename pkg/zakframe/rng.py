# zakframe/rng.py
"""
Counter-based point sampling.

Trial streams are Philox keyed by master_seed + (trial << 64), read from
counter 0. Word i maps to [0,1) through its top 53 bits, so a given
(master_seed, trial, i) always gives the same point, on every platform and
under any scheduling of trials.
"""
from __future__ import annotations

import numpy as np

from .errors import SpecValidationError

SEED_BITS = 64
_MANTISSA = 2.0 ** 53


def check_seed(master_seed: int) -> int:
    if isinstance(master_seed, bool) or int(master_seed) != master_seed or not 0 <= master_seed < 1 << SEED_BITS:
        raise SpecValidationError(f"master seed must be an unsigned 64-bit integer, got {master_seed!r}")
    return int(master_seed)


def derived_seed(master_seed: int, trial_index: int) -> int:
    """128-bit Philox key of a trial stream."""
    if int(trial_index) != trial_index or not 0 <= trial_index < 1 << SEED_BITS:
        raise SpecValidationError(f"trial index must be an unsigned 64-bit integer, got {trial_index!r}")
    return check_seed(master_seed) + (int(trial_index) << SEED_BITS)


def uniform_words(m: int, master_seed: int, trial_index: int) -> np.ndarray:
    """First m raw 64-bit words of the trial stream."""
    if int(m) != m or m < 0:
        raise SpecValidationError(f"point count must be >= 0, got {m}")
    gen = np.random.Philox(key=derived_seed(master_seed, trial_index))
    return np.asarray(gen.random_raw(int(m)), dtype=np.uint64)


def sample_uniform(m: int, master_seed: int, trial_index: int) -> np.ndarray:
    """m points in [0,1): (w >> 11) / 2⁵³."""
    words = uniform_words(m, master_seed, trial_index)
    return (words >> np.uint64(11)).astype(float) / _MANTISSA
