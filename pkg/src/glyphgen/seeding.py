"""Derived-seed helpers.

Child seeds are a stable hash of (master seed, purpose tag, index), so adding
lines/samples to a run never perturbs the ones already generated, and
parallel schedules produce identical artifacts.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEED_BITS = 64


def child_seed(master: int, *tags: object) -> int:
    """Derive a deterministic 64-bit child seed from a master seed and tags."""
    key = ":".join([str(int(master))] + [str(t) for t in tags])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (1 << _SEED_BITS)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def child_rng(master: int, *tags: object) -> np.random.Generator:
    return make_rng(child_seed(master, *tags))
