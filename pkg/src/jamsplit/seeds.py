"""Deterministic seed derivation shared by the solvers and the sweep harness.

All stochastic components draw from numpy Generators seeded through
``SeedSequence`` over small integer key tuples, so independent streams can be
reproduced without coordinating global state.  Adding new keys (more sweep
values, more replicates) never perturbs streams derived from other keys.
"""
from __future__ import annotations

import numpy as np


def derive_seed(*keys: int) -> int:
    """Hash a tuple of nonnegative integers into a 64-bit stream seed."""
    for key in keys:
        if int(key) < 0:
            raise ValueError(f"seed keys must be nonnegative, got {key}")
    seq = np.random.SeedSequence([int(k) for k in keys])
    return int(seq.generate_state(1, np.uint64)[0])


def derive_rng(*keys: int) -> np.random.Generator:
    """Generator seeded from a key tuple via the same hash as derive_seed."""
    return np.random.default_rng(derive_seed(*keys))
