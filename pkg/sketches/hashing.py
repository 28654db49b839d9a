# sketches/hashing.py
"""Seeded k-wise independent hash families over the Mersenne prime 2^31 - 1.

Every sketch draws its coefficients from ``numpy.random.SeedSequence(seed,
spawn_key=...)``, so the seed schedule is a pure function of the user seed and
the structural position of the sketch (row, grid cell, checkpoint).
"""
from typing import Sequence, Union

import numpy as np

MERSENNE_P = (1 << 31) - 1

ArrayLike = Union[int, Sequence[int], np.ndarray]


def seeded_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key)))


class PolyHashFamily:
    """``count`` independent degree-(k-1) polynomials evaluated mod p."""

    def __init__(self, k: int, count: int, seed: int, spawn_key: Sequence[int] = ()):
        self.k = k
        self.count = count
        rng = seeded_rng(seed, *spawn_key)
        self.coefficients = rng.integers(0, MERSENNE_P, size=(count, k), dtype=np.int64)
        # leading coefficient nonzero keeps the polynomial degree k-1
        self.coefficients[:, 0] = rng.integers(1, MERSENNE_P, size=count, dtype=np.int64)

    def hash(self, items: ArrayLike) -> np.ndarray:
        """Hash values, shape ``(count,) + shape(items)``."""
        x = np.asarray(items, dtype=np.int64) % MERSENNE_P
        out = np.zeros((self.count,) + x.shape, dtype=np.int64)
        coeffs = self.coefficients.reshape((self.count, self.k) + (1,) * x.ndim)
        for j in range(self.k):
            out = (out * x + coeffs[:, j]) % MERSENNE_P
        return out

    def buckets(self, items: ArrayLike, width: int) -> np.ndarray:
        return self.hash(items) % width

    def signs(self, items: ArrayLike) -> np.ndarray:
        return 1 - 2 * (self.hash(items) & 1)

    def unit(self, items: ArrayLike) -> np.ndarray:
        """Values in [0, 1)."""
        return self.hash(items) / MERSENNE_P
