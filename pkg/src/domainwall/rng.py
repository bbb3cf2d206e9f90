"""SplitMix64 random stream with platform-independent draws.

Uniform reals are ``(u64 >> 11) * 2**-53``.  Uniform integers in ``[a, b]``
take the low ``k`` bits of successive draws, with ``2**k`` the smallest power
of two covering the range, and reject values past the range.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _mix(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in the closed interval ``[a, b]``."""
        if b < a:
            raise ValueError(f"empty range [{a}, {b}]")
        span = b - a + 1
        mask = (1 << (span - 1).bit_length()) - 1
        while True:
            x = self.next_u64() & mask
            if x < span:
                return a + x

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()


def derive_seed(*parts: int) -> int:
    """Hash integers into a 64-bit seed by chaining SplitMix64 outputs.

    Each part only affects seeds that include it, so extending a list of
    sizes never changes the seeds of existing ``(master, size, index)`` keys.
    """
    h = 0
    for p in parts:
        h = SplitMix64(h ^ (int(p) & _MASK)).next_u64()
    return h
