"""Deterministic, independently addressable random streams.

A stream is identified by ``(master_seed, stream_index)``.  The generator
for a stream is derived through :class:`numpy.random.SeedSequence` with the
index as spawn key, so the values drawn from stream ``i`` never depend on how
many other streams exist or in which order they are consumed.  Parallel
workers therefore only need to agree on indices.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream", "streams", "as_generator"]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Immutable descriptor of one random stream.

    Parameters
    ----------
    master_seed : int
        64-bit master seed (reduced modulo 2**64).
    stream_index : int
        Non-negative stream index.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")
        object.__setattr__(self, "master_seed", int(self.master_seed) & _SEED_MASK)

    def generator(self):
        """Return a fresh :class:`numpy.random.Generator` positioned at the stream start."""
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


def streams(master_seed, count, start=0):
    """List of ``count`` consecutive streams under one master seed."""
    return [RngStream(master_seed, start + i) for i in range(count)]


def as_generator(rng):
    """Accept an :class:`RngStream`, a ``Generator`` or an int seed."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
