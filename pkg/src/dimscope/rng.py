"""Deterministic, label-derived random streams.

Every randomized operation draws from a generator derived from
``(seed, *labels)`` so results never depend on call order and repeated
calls are bit-identical on every platform (PCG64 is portable).
"""

import hashlib

import numpy as np

MAX_SEED = 2**64 - 1


def _label_entropy(label) -> int:
    digest = hashlib.sha256(repr(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def stream(seed: int, *labels) -> np.random.Generator:
    """Generator for the stream named by ``labels`` under ``seed``."""
    entropy = [check_seed(seed)] + [_label_entropy(lab) for lab in labels]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, *labels) -> int:
    """A child 64-bit seed for the stream named by ``labels``."""
    return int(stream(seed, *labels).integers(0, MAX_SEED, dtype=np.uint64))
