"""Deterministic seed derivation.

One global seed is expanded into independent per-component seeds by hashing
the component's tag path.  The scheme is counter-free and order-independent:
the seed for ("ablate", 37) never depends on how many other streams were
drawn first, which keeps parallel execution reproducible.
"""

import hashlib

import numpy as np


def derive_seed(root: int, *tags: object) -> int:
    """Return a 64-bit seed for the stream identified by ``tags`` under ``root``."""
    label = ":".join(str(t) for t in (root, *tags))
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def rng_for(root: int, *tags: object) -> np.random.Generator:
    """Generator seeded by :func:`derive_seed` for the same arguments."""
    return np.random.Generator(np.random.PCG64(derive_seed(root, *tags)))
