"""Measurement randomness sources.

Every measurement in the simulators asks a source for one bit given
Pr(outcome = 1).  ``Rng`` draws seeded pseudo-random bits; ``ForcedOutcomes``
replays a scripted transcript while tracking its likelihood, which turns any
sampling routine into an exact distribution enumerator.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


class DeadBranch(Exception):
    """A forced transcript hit an outcome of probability zero."""


class Rng:
    """Seeded bit source backed by numpy's PCG64 generator."""

    def __init__(self, seed: int):
        self.seed = seed
        self._gen = np.random.default_rng(seed)

    @classmethod
    def child(cls, seed: int, index: int) -> "Rng":
        """Deterministic sub-stream ``index`` of the stream ``seed``."""
        rng = cls.__new__(cls)
        rng.seed = seed
        rng._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,)))
        )
        return rng

    def draw(self, p_one: float) -> int:
        """One bit with Pr(1) = p_one; exact at p_one in {0.0, 1.0}."""
        if p_one <= 0.0:
            return 0
        if p_one >= 1.0:
            return 1
        return 1 if self._gen.random() < p_one else 0

    def random(self, size: int) -> np.ndarray:
        return self._gen.random(size)

    def integers(self, low: int, high: int) -> int:
        return int(self._gen.integers(low, high))

    def choice(self, seq: Sequence):
        return seq[int(self._gen.integers(len(seq)))]


class ForcedOutcomes:
    """Replays a fixed outcome transcript and accumulates its probability.

    ``likelihood`` is the product of the probabilities of the forced
    outcomes so far; a zero-probability branch raises ``DeadBranch``
    immediately so enumeration can prune it.
    """

    def __init__(self, bits: Sequence[int]):
        self.bits = tuple(int(b) for b in bits)
        self.cursor = 0
        self.likelihood = 1.0

    def draw(self, p_one: float) -> int:
        if self.cursor >= len(self.bits):
            raise IndexError("forced transcript exhausted")
        bit = self.bits[self.cursor]
        self.cursor += 1
        p = p_one if bit else 1.0 - p_one
        self.likelihood *= p
        if self.likelihood == 0.0:
            raise DeadBranch
        return bit

    @property
    def exhausted(self) -> bool:
        return self.cursor == len(self.bits)
