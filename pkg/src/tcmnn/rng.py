"""Deterministic 64-bit pseudo-random generator used everywhere randomness is needed.

The generator is SplitMix64 (Steele, Lea & Flood; the reference constants
0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB), chosen because it
is tiny, published, and trivially reproducible in any language.  Dataset
splits and network initialisation are defined in terms of this generator so
that a seed fully determines the result.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream seeded with an unsigned 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def next_uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_double()

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias (rejection sampling)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = _MASK - (_MASK + 1) % n
        while True:
            x = self.next_u64()
            if x <= limit:
                return x % n

    def sample_without_replacement(self, population: int, count: int) -> list[int]:
        """`count` distinct indices from range(population), in draw order.

        Implemented as a partial Fisher-Yates shuffle so the result is a pure
        function of the seed.
        """
        if count > population:
            raise ValueError("count exceeds population")
        pool = list(range(population))
        picked = []
        for i in range(count):
            j = i + self.next_below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
            picked.append(pool[i])
        return picked
