"""Deterministic seeded RNG used by the instance generator.

The generator is a splitmix64: state advances by the 64-bit golden-gamma
constant and the output is the finalizer mix of the new state.  All derived
draws (``below``, ``fraction``) are specified here so that instances are
reproducible bit-for-bit from a single 64-bit seed, in any implementation:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z      <- state
    z      <- ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z      <- ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output <- z xor (z >> 31)

``below(n)`` is ``next() mod n``; the modulo bias is irrelevant at the
tiny ranges used here and keeps the recipe a one-liner for reimplementors.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n

    def chance(self, probability_millionths: int) -> bool:
        """True with probability millionths/10^6."""
        return self.below(1_000_000) < probability_millionths

    def fraction(self, max_numerator: int, max_denominator: int) -> Fraction:
        """Uniform numerator in 0..max_numerator, denominator in 1..max_denominator."""
        num = self.below(max_numerator + 1)
        den = 1 + self.below(max_denominator)
        return Fraction(num, den)
