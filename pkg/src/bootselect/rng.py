"""Counter-based SplitMix64 streams.

Every random quantity in the package comes from a :class:`Stream`. A stream is
a pure function of ``(seed, position)``, so the values never depend on numpy's
generator internals, on call order, or on how work is split across processes.

Seed derivation
---------------
``derive_seed(master, k1, k2, ...)`` folds keys into the master seed::

    h = mix64(master)
    for k in keys:
        h = mix64(h ^ mix64(k + GOLDEN))

where ``mix64`` is the SplitMix64 finalizer and ``GOLDEN = 0x9E3779B97F4A7C15``.
Output ``i`` of a stream seeded with ``s`` is ``mix64(s + (i + 1) * GOLDEN)``
(all arithmetic modulo 2**64). The golden values in ``tests/test_rng.py`` pin
this scheme; changing it changes every result the package produces.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_GOLDEN_U = np.uint64(GOLDEN)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 2.0**-53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (result in [0, 2**64))."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def derive_seed(master: int, *keys: int) -> int:
    if master < 0 or master > MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {master}")
    h = mix64(master)
    for k in keys:
        h = mix64(h ^ mix64(int(k) + GOLDEN))
    return h


class Stream:
    """Sequential reader over a SplitMix64 counter stream."""

    def __init__(self, seed: int):
        if seed < 0 or seed > MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.position = 0

    def u64(self, size: int) -> np.ndarray:
        counters = np.arange(self.position + 1, self.position + size + 1, dtype=np.uint64)
        self.position += size
        with np.errstate(over="ignore"):
            return _mix64_array(np.uint64(self.seed) + counters * _GOLDEN_U)

    def uniform(self, size: int) -> np.ndarray:
        """Doubles in [0, 1) with 53 random bits each."""
        return (self.u64(size) >> _S11).astype(np.float64) * _TWO_M53

    def integers(self, n: int, size: int) -> np.ndarray:
        """Indices in [0, n); bias is at most n / 2**53."""
        if n < 1:
            raise ValueError("n must be >= 1")
        idx = np.floor(self.uniform(size) * n).astype(np.int64)
        return np.minimum(idx, n - 1)

    def normal(self, size: int) -> np.ndarray:
        """Standard normals by Box-Muller, interleaved cos/sin per uniform pair.

        Prefix-stable: the first k values do not depend on ``size``.
        """
        pairs = (size + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        angle = 2.0 * math.pi * u[:, 1]
        z = np.empty((pairs, 2))
        z[:, 0] = radius * np.cos(angle)
        z[:, 1] = radius * np.sin(angle)
        return z.ravel()[:size]
