"""Replayable randomness.

Every random draw in graphonlab flows from an :class:`RngSeed`, a
``(seed, stream)`` pair. The pair is fed to :class:`numpy.random.SeedSequence`
(``entropy=seed``, ``spawn_key=(stream,)``) and drives a PCG64 bit generator,
so a given pair reproduces the same numbers bit-for-bit on every platform
numpy supports. Distinct streams under one seed are statistically
independent, which is how concurrent trials are kept apart.
"""

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSeed:
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream", int(self.stream) & _MASK64)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, index: int) -> "RngSeed":
        """Deterministic child seed, e.g. one per trial or grid point."""
        mixed = (self.stream * 0x9E3779B97F4A7C15 + int(index) + 1) & _MASK64
        return RngSeed(self.seed, mixed)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngSeed, a Generator, an int seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSeed):
        return rng.generator()
    if rng is None:
        return RngSeed().generator()
    return RngSeed(int(rng)).generator()
