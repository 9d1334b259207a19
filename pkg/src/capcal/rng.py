"""Deterministic pseudo-random generator for the synthetic oracle.

The generator family, seed expansion, and draw order are pinned down in
``docs/rng.md`` so that golden values frozen in the test suite stay valid
across platforms and reimplementations.  Seeds are expanded with SplitMix64
and the stream itself is xoshiro256**.
"""

from __future__ import annotations

import math

_MASK64 = 0xFFFFFFFFFFFFFFFF
_TWO53_INV = 2.0 ** -53


def splitmix64(state: int):
    """Advance a SplitMix64 state once; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    """FNV-1a 64-bit hash of the UTF-8 encoding of ``text``."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & _MASK64
    return h


class Xoshiro256StarStar:
    """xoshiro256** seeded via four SplitMix64 outputs from a 64-bit seed."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        state = seed & _MASK64
        state, self._s0 = splitmix64(state)
        state, self._s1 = splitmix64(state)
        state, self._s2 = splitmix64(state)
        state, self._s3 = splitmix64(state)

    def set_state(self, s0: int, s1: int, s2: int, s3: int) -> None:
        self._s0, self._s1, self._s2, self._s3 = (
            s0 & _MASK64, s1 & _MASK64, s2 & _MASK64, s3 & _MASK64)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        x = (s1 * 5) & _MASK64
        result = (((x << 7) | (x >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform float64 in [0, 1): top 53 bits of the next output."""
        return (self.next_u64() >> 11) * _TWO53_INV

    def random_open(self) -> float:
        """Uniform float64 in (0, 1]: (top 53 bits + 1) * 2**-53."""
        return ((self.next_u64() >> 11) + 1) * _TWO53_INV

    def normal(self) -> float:
        """Standard normal via Box-Muller, cosine branch only.

        Consumes exactly two outputs: u1 in (0,1] then u2 in [0,1).
        """
        u1 = self.random_open()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def gumbel(self) -> float:
        """Standard Gumbel draw -ln(-ln(u)) with u in (0, 1]; one output.

        u = 1 maps to +inf analytically; the (0,1] draw makes -ln(u) = 0
        possible, so the inner log is guarded by the 2**-53 granularity of
        random_open(): u < 1 always satisfies -ln(u) > 0.
        """
        u = self.random_open()
        if u >= 1.0:
            u = 1.0 - _TWO53_INV
        return -math.log(-math.log(u))

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) as floor(random() * n), clamped."""
        i = int(self.random() * n)
        return n - 1 if i >= n else i

    def multinomial(self, weights) -> int:
        """Index drawn with probability weight[i] / sum(weights).

        Consumes one output.  The cumulative walk runs in index order; the
        final index absorbs any rounding slack.
        """
        total = 0.0
        for w in weights:
            total += w
        threshold = self.random() * total
        acc = 0.0
        last = 0
        for i, w in enumerate(weights):
            acc += w
            if threshold < acc:
                return i
            last = i
        return last
