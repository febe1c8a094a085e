"""Sylvester Hadamard matrices and the binary RIS reflection patterns built from them.

Patterns are rows of a Sylvester Hadamard matrix with entries +1 (phase 0) and
-1 (phase pi). Row ``r`` of ``H_n`` has entries ``(-1) ** popcount(r & j)``,
so for ``r < K`` the row only depends on ``j mod K``: the first K rows of
``H_n`` are the rows of ``H_K`` tiled ``n / K`` times. Indices are 0-based,
pattern 0 is the all-ones vector.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvalidDimensions, NotPowerOfTwo

__all__ = [
    "is_power_of_two",
    "sylvester",
    "hadamard_row",
    "PatternSet",
    "pattern_set",
    "difference_profile",
]


def is_power_of_two(n) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def sylvester(n: int) -> np.ndarray:
    """Sylvester Hadamard matrix of order ``n`` as an int8 array.

    >>> sylvester(2)
    array([[ 1,  1],
           [ 1, -1]], dtype=int8)
    """
    if not is_power_of_two(n):
        raise NotPowerOfTwo(f"Hadamard order must be a power of two, got {n}")
    H = np.ones((1, 1), dtype=np.int8)
    H2 = np.array([[1, 1], [1, -1]], dtype=np.int8)
    while H.shape[0] < n:
        H = np.kron(H2, H)
    return H


def hadamard_row(n: int, i: int) -> np.ndarray:
    """Row ``i`` of ``sylvester(n)`` computed without building the matrix."""
    if not is_power_of_two(n):
        raise NotPowerOfTwo(f"Hadamard order must be a power of two, got {n}")
    if not 0 <= i < n:
        raise IndexOutOfRange(f"row {i} outside 0..{n - 1}")
    j = np.arange(n, dtype=np.uint64)
    parity = np.bitwise_count(np.uint64(i) & j) & 1
    return (1 - 2 * parity.astype(np.int8)).astype(np.int8)


@dataclass(frozen=True)
class PatternSet:
    """K reflection patterns of length n (entries +-1), one per row."""

    n: int
    K: int
    patterns: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.patterns, dtype=np.int8)
        if p.shape != (self.K, self.n):
            raise InvalidDimensions(f"patterns shape {p.shape} != ({self.K}, {self.n})")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "patterns", p)

    def __len__(self):
        return self.K

    def __getitem__(self, k):
        return self.patterns[k]

    def column_classes(self):
        """Group element positions by identical pattern column.

        Returns ``(columns, counts)`` where ``columns`` is a ``(K, C)`` array of
        the distinct columns and ``counts[c]`` is how many elements share
        column ``c``. For a Hadamard set there are K classes of n/K elements.
        """
        cols, counts = np.unique(self.patterns.T, axis=0, return_counts=True)
        return cols.T.astype(np.int8), counts


def pattern_set(n: int, K: int) -> PatternSet:
    """First K rows of ``H_n``, built by tiling ``H_K`` instead of forming ``H_n``."""
    if not (is_power_of_two(n) and is_power_of_two(K)) or K > n:
        raise InvalidDimensions(f"need powers of two with K <= n, got n={n}, K={K}")
    return PatternSet(n, K, np.tile(sylvester(K), (1, n // K)))


def difference_profile(patterns: PatternSet, m: int, l: int) -> tuple[int, int]:
    """``(count of +-2 entries, count of zeros)`` in ``patterns[m] - patterns[l]``."""
    for idx in (m, l):
        if not 0 <= idx < patterns.K:
            raise IndexOutOfRange(f"pattern index {idx} outside 0..{patterns.K - 1}")
    diff = patterns[m].astype(np.int16) - patterns[l].astype(np.int16)
    nonzero = int(np.count_nonzero(diff))
    return nonzero, patterns.n - nonzero
