"""Deterministic pseudorandom instance generation.

A split-mix style 64-bit generator drives all sampling; the constants are
the usual ones (golden-gamma increment 0x9E3779B97F4A7C15, finalizer
multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with shifts
30/27/31).  A subset of Z/pZ is drawn by masking p independent bits off
the output stream (low bits first, ceil(p/64) words, little-endian) and
rejecting the empty set.  Identical seed, identical sequence.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """The splitmix64 finalizer; also used for report checksums."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """64-bit splitmix stream seeded with a 64-bit integer."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        return mix64(self.state)

    def next_below(self, n: int) -> int:
        """Uniform-ish draw in [0, n) by reduction; n is tiny next to 2^64."""
        return self.next_u64() % n

    def next_subset(self, p: int) -> int:
        """Non-empty subset of Z/pZ as a bitmask: p masked bits, empty rejected."""
        while True:
            m = 0
            for word_index in range((p + 63) // 64):
                m |= self.next_u64() << (64 * word_index)
            m &= (1 << p) - 1
            if m:
                return m
