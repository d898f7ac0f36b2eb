"""Deterministic seeded PRNG: splitmix64 stream with uniform and Gaussian draws.

The whole toolkit routes randomness through this module so that attack
simulations and benchmark runs are reproducible bit-for-bit from a single
64-bit seed, independent of platform and numpy version.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = np.float64(1.0 / (1 << 53))


def _finalize(z):
    """splitmix64 output function on a uint64 array or scalar (wrapping mod 2^64)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def mix_seed(seed, stream):
    """Derive an independent child seed from (seed, stream index).

    Used by the CLI to hand each benchmark task its own stream.
    """
    s = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    t = np.uint64(int(stream) & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        return int(_finalize(s + _GOLDEN * (t + np.uint64(1))))


class SplitMix64:
    """Counter-based splitmix64: the i-th output is finalize(seed + (i+1)*GOLDEN).

    Counter form means a block of outputs can be produced vectorized while
    staying identical to sequential generation.
    """

    def __init__(self, seed):
        self._seed = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def next_raw(self, n):
        """Next n raw uint64 outputs."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            return _finalize(self._seed + idx * _GOLDEN)

    def uniform(self, n):
        """n doubles in (0, 1]: (raw >> 11) * 2^-53, with 0 mapped up to 2^-53.

        The open-at-zero guard keeps log(u) finite for Box-Muller.
        """
        u = (self.next_raw(n) >> np.uint64(11)).astype(np.float64) * _U53
        return np.maximum(u, _U53)

    def gaussian(self, n):
        """n standard normal draws via Box-Muller on consecutive uniform pairs."""
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        u1, u2 = u[0::2], u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * m)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return z[:n]
