"""Seedable, portable random number generator.

Corpora and campaigns must be reproducible bit-for-bit across runs,
platforms, and re-implementations, so randomness flows through SplitMix64
(Steele, Lea & Flood 2014) rather than a language-supplied generator whose
stream is an implementation detail. The algorithm is small enough to restate
in full: the 64-bit state advances by the golden-gamma constant
0x9E3779B97F4A7C15 and each output is the finalization mix

    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

with all arithmetic modulo 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return (z ^ (z >> 31)) & MASK64


class SplitMix64:
    """Deterministic 64-bit generator with a documented algorithm."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return _mix(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Uses rejection to avoid modulo bias."""
        if n <= 0:
            raise ValueError("randrange() argument must be positive")
        # Largest multiple of n that fits in 64 bits.
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, seq):
        if not seq:
            raise ValueError("choice() on empty sequence")
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list) -> None:
        """Fisher-Yates, in place."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def weighted_choice(self, options, weights) -> int:
        """Index into options proportional to weights (non-negative, sum > 0)."""
        total = float(sum(weights))
        if total <= 0:
            raise ValueError("weights must sum to a positive value")
        r = self.random() * total
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if r < acc:
                return i
        return len(options) - 1

    def derive(self, *keys: int) -> "SplitMix64":
        """Child generator with an independent stream.

        Each key is mixed into the parent seed, so (seed, key...) pairs map to
        stable streams regardless of draw order on the parent.
        """
        state = self._state
        for key in keys:
            state = _mix((state ^ (key & MASK64)) + _GAMMA & MASK64)
        return SplitMix64(state)
