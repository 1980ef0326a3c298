"""Deterministic random-stream derivation for reproducible parallel sampling.

Every Monte Carlo routine in this package draws from streams derived from a
single 64-bit master seed and a (purpose, chunk) pair.  A chunk is a fixed
block of sample indices, so results do not depend on how chunks are
scheduled over workers.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1

#: samples per derived stream; fixed so that results are independent of the
#: worker count and of the total sample budget's chunking.
CHUNK_SIZE = 4096


def _purpose_key(purpose: str) -> int:
    # stable across processes (unlike hash()), 64-bit
    digest = hashlib.blake2b(purpose.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_stream(seed: int, purpose: str, chunk: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, purpose, chunk).

    The same triple always yields the same stream, regardless of which
    worker or in which order it is consumed.
    """
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=(_purpose_key(purpose), int(chunk)),
    )
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(total: int, chunk_size: int = CHUNK_SIZE) -> list[int]:
    """Split ``total`` samples into fixed-size blocks (last one ragged)."""
    if total < 0:
        raise ValueError("sample count must be nonnegative")
    full, rest = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if rest:
        sizes.append(rest)
    return sizes
