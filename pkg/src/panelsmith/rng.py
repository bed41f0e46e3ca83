"""Deterministic random-stream derivation.

Python's ``hash()`` is salted per process, so named streams are derived
through sha256 instead. Two streams with different name parts never share
state, which is what keeps pipeline layers from perturbing each other.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, *parts: object) -> int:
    """Mix a base seed with any number of labels into a new 64-bit seed."""
    material = ":".join([str(seed), *map(str, parts)]).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(seed: int, *parts: object) -> random.Random:
    """A fresh ``random.Random`` seeded from (seed, *parts)."""
    return random.Random(derive_seed(seed, *parts))
