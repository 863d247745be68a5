"""SplitMix64: a tiny counter-based generator with a fixed, portable definition.

Streams are derived from ``(seed, *path)`` by hashing the path into the
starting counter, so instance ``i`` of a corpus never depends on how many
numbers instance ``i - 1`` consumed.
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK
    return z ^ (z >> 31)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int, *path: int):
        s = seed & MASK
        for part in path:
            s = mix64((s + GOLDEN * ((part & MASK) + 1)) & MASK)
        self.state = s

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("empty range")
        limit = MASK - (MASK % n + 1) % n
        while True:
            x = self.next64()
            if x <= limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def split(self, *path: int) -> "SplitMix64":
        return SplitMix64(self.state, *path)
