"""Deterministic random streams.

All randomness in the library flows through :func:`substream`, which builds a
counter-based Philox generator keyed by a root seed plus a path of labels.
Streams for distinct paths are independent, and the same (seed, path) always
yields the same sequence regardless of how many other streams exist or in
which order they are consumed. That makes parallel trials reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_key(label: int | str) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label)
    # Stable across processes, unlike builtin hash().
    digest = hashlib.blake2s(str(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def substream(seed: int, *path: int | str) -> np.random.Generator:
    """Return a Philox generator for the stream identified by (seed, *path)."""
    keys = [int(seed)] + [_label_key(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(keys)))
