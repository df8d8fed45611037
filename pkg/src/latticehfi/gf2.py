"""Linear algebra over F2 with vectors packed into Python ints."""
from __future__ import annotations

from typing import Iterable, Sequence


class Echelon:
    """Incrementally built row-echelon basis keyed by leading bit."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        rows = self.rows
        while v:
            top = v.bit_length() - 1
            r = rows.get(top)
            if r is None:
                return v
            v ^= r
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
            return True
        return False

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.rows)

    def basis(self) -> list[int]:
        return [self.rows[k] for k in sorted(self.rows)]


def rank(vectors: Iterable[int]) -> int:
    return len(Echelon(vectors))


def kernel(images: Sequence[int]) -> list[int]:
    """Kernel of the map sending source basis vector i to ``images[i]``.

    Returned vectors are bitmasks over the source basis.
    """
    rows: dict[int, tuple[int, int]] = {}
    out = []
    for i, v in enumerate(images):
        tag = 1 << i
        while v:
            top = v.bit_length() - 1
            hit = rows.get(top)
            if hit is None:
                rows[top] = (v, tag)
                break
            v ^= hit[0]
            tag ^= hit[1]
        else:
            out.append(tag)
    return out


def apply(images: Sequence[int], v: int) -> int:
    """Apply the linear map with the given basis images to bitmask v."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= images[i]
        v >>= 1
        i += 1
    return out


def bits(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


def rref(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced echelon form: pivot bit → row, each pivot bit set in its row only."""
    rows = Echelon(vectors).rows
    for p in sorted(rows):
        r = rows[p]
        for q in list(rows):
            if q != p and rows[q] >> p & 1:
                rows[q] ^= r
    return rows


def reduce_full(v: int, rows: dict[int, int]) -> int:
    """Strip every pivot bit of a reduced echelon form from v."""
    for p, r in rows.items():
        if v >> p & 1:
            v ^= r
    return v
