"""The 48-bit linear congruential generator behind ``java.util.Random``.

Seeded shuffles in this package go through it, so a split or fold
assignment made here with seed ``s`` puts the same rows in the same places
as the WEKA toolkit does with ``new Random(s)``.
"""
from __future__ import annotations

_MULT = 0x5DEECE66D
_ADD = 0xB
_MASK = (1 << 48) - 1


def _to_int32(x: int) -> int:
    x &= 0xFFFFFFFF
    return x - (1 << 32) if x >= 1 << 31 else x


class JavaRandom:
    def __init__(self, seed: int):
        self._seed = (seed ^ _MULT) & _MASK

    def _next(self, bits: int) -> int:
        self._seed = (self._seed * _MULT + _ADD) & _MASK
        return _to_int32(self._seed >> (48 - bits))

    def next_int(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound & -bound == bound:
            return _to_int32((bound * self._next(31)) >> 31)
        while True:
            bits = self._next(31)
            val = bits % bound
            # rejection step; mirrors the int32 overflow test
            if _to_int32(bits - val + (bound - 1)) >= 0:
                return val

    def next_double(self) -> float:
        return ((self._next(26) << 27) + self._next(27)) * (1.0 / (1 << 53))


def shuffled_order(n: int, seed: int) -> list[int]:
    """Row order after WEKA's ``Instances.randomize(new Random(seed))``."""
    rng = JavaRandom(seed)
    order = list(range(n))
    for j in range(n - 1, 0, -1):
        k = rng.next_int(j + 1)
        order[j], order[k] = order[k], order[j]
    return order


def stratified_order(order: list[int], labels) -> list[int]:
    """WEKA's in-place class grouping (``Instances.stratify`` before dealing).

    Groups appear in order of first occurrence; within a group the order
    follows the swap sequence, which is not a stable sort.
    """
    rows = list(order)
    n = len(rows)
    index = 1
    while index < n:
        first = labels[rows[index - 1]]
        for j in range(index, n):
            if labels[rows[j]] == first:
                rows[index], rows[j] = rows[j], rows[index]
                index += 1
        index += 1
    return rows


def interleave(rows: list[int], k: int) -> list[int]:
    """Take every k-th row starting at 0, then at 1, ... (``stratStep``)."""
    out = []
    for start in range(k):
        out.extend(rows[start::k])
    return out
