"""Deterministic randomness for splits, simulations, and experiments.

All randomness in the package flows from a single integer seed through two
documented mechanisms:

* ``SplitMix64`` - the generator itself. 64-bit state, advanced by the golden
  gamma ``0x9E3779B97F4A7C15`` and finalized with the splitmix64 mixer
  (Steele, Lea & Flood's SplittableRandom finalizer). It drives the
  Fisher-Yates shuffles used for corpus sampling, so splits are reproducible
  across platforms and Python versions with no dependency on library RNG
  internals.
* ``derive(seed, *keys)`` - stream splitting. Each (seed, key path) pair maps
  to an independent 64-bit child seed by folding the keys (strings are hashed
  with FNV-1a 64) into the mixer. Child streams never share state, so
  per-class, per-trial, or per-sample-size work can run in any order, or in
  parallel, without changing results.

Bulk categorical sampling (multinomial draws in the convergence simulator)
uses ``numpy_gen``: a NumPy ``Generator`` seeded from a derived child seed.
The documented contract is the (seed, key path), not NumPy's bit stream.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix(z: int) -> int:
    """splitmix64 finalizer: bijective 64-bit avalanche."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive(seed: int, *keys: int | str) -> int:
    """Map a master seed plus a key path to an independent 64-bit child seed."""
    h = _mix(seed & _MASK64)
    for key in keys:
        k64 = _fnv1a64(key.encode("utf-8")) if isinstance(key, str) else key & _MASK64
        h = _mix((h + _GOLDEN) ^ k64)
    return h


class SplitMix64:
    """Minimal 64-bit-state PRNG with unbiased bounded ints and Fisher-Yates."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, iterating from the last index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def numpy_gen(seed: int, *keys: int | str) -> np.random.Generator:
    """NumPy Generator seeded from the derived (seed, key path) child seed."""
    return np.random.Generator(np.random.PCG64(derive(seed, *keys)))
