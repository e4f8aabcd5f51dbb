"""Deterministic, splittable random streams.

Every experiment run owns a family of independent generators derived from a
single integer seed.  The split is positional, so adding more runs or more
arms never perturbs the streams of existing ones:

* run ``r`` of a batch uses seed ``base + r``;
* within a run, stream ``(kind, index)`` is ``SeedSequence(seed,
  spawn_key=(kind, index))``.

Kind 0 is reserved for per-arm outcome streams (index = arm), kind 1 for the
policy's own randomness (index 0).
"""

from __future__ import annotations

import numpy as np

ARM_STREAM = 0
POLICY_STREAM = 1


def run_seed(base: int, run: int) -> int:
    """Seed for run number ``run`` (0-based) of a batch."""
    return int(base) + int(run)


def substream(seed: int, kind: int, index: int) -> np.random.Generator:
    """Independent generator for stream ``(kind, index)`` under ``seed``."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(kind), int(index)))
    return np.random.default_rng(seq)
