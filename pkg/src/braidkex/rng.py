"""Seeded 64-bit generator shared by every instance generator in the package.

SplitMix64 is used instead of :mod:`random` so that a seed reproduces the
same instances in any language that implements the same few lines.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood).  ``next_u64`` advances the state by
    the golden gamma and returns the mixed state."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Value in ``[0, bound)`` by plain reduction modulo ``bound``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def between(self, lo: int, hi: int) -> int:
        """Value in the inclusive range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, items):
        return items[self.below(len(items))]


def derive_seed(seed: int, *path: int) -> int:
    """Derive a sub-seed from ``seed`` by mixing in each integer of ``path``."""
    s = seed & MASK64
    for p in path:
        s = SplitMix64(s ^ (((p + 1) * GOLDEN_GAMMA) & MASK64)).next_u64()
    return s
