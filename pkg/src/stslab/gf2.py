"""Bit-packed GF(2) linear algebra.

Rows are Python ints; bit ``j`` of a row is column ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BinaryMatrix:
    rows: tuple[int, ...]
    n_cols: int

    def __post_init__(self):
        limit = 1 << self.n_cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.n_cols} columns")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], n_cols: int | None = None) -> "BinaryMatrix":
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        return cls(tuple(bits_from_list(r) for r in rows), n_cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [bits_to_list(r, self.n_cols) for r in self.rows]

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix(tuple(transpose(self.rows, self.n_cols)), self.n_rows)

    def matvec(self, x: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out


def bits_from_list(values: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(values):
        if b & 1:
            out |= 1 << j
    return out


def bits_to_list(value: int, n: int) -> list[int]:
    return [(value >> j) & 1 for j in range(n)]


def iter_bits(value: int):
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def transpose(rows: Sequence[int], n_cols: int) -> list[int]:
    out = [0] * n_cols
    for i, r in enumerate(rows):
        for j in iter_bits(r):
            out[j] |= 1 << i
    return out


def _rows(m) -> list[int]:
    return list(m.rows) if isinstance(m, BinaryMatrix) else list(m)


def rref(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    out: list[int] = []
    while work:
        r = work.pop()
        for p, o in zip(pivots, out):
            if (r >> p) & 1:
                r ^= o
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for i, o in enumerate(out):
            if (o >> p) & 1:
                out[i] = o ^ r
        out.append(r)
        pivots.append(p)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], [pivots[i] for i in order]


def gf2_rank(m) -> int:
    return len(rref(_rows(m))[0])


def gf2_kernel(m, n_cols: int | None = None) -> BinaryMatrix:
    """Basis of {x : M x = 0}, one row per free column in increasing order."""
    if n_cols is None:
        n_cols = m.n_cols
    red, piv = rref(_rows(m))
    pivset = set(piv)
    basis = []
    for f in range(n_cols):
        if f in pivset:
            continue
        v = 1 << f
        for r, p in zip(red, piv):
            if (r >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BinaryMatrix(tuple(basis), n_cols)


def gf2_solve(m, b: int, n_cols: int | None = None) -> int | None:
    """Some x with M x = b (b bit i is the target of row i), or None."""
    if n_cols is None:
        n_cols = m.n_cols
    aug = 1 << n_cols
    rows = [r | (aug if (b >> i) & 1 else 0) for i, r in enumerate(_rows(m))]
    red, piv = rref(rows)
    x = 0
    for r, p in zip(red, piv):
        if p == n_cols:
            return None
        if r & aug:
            x |= 1 << p
    return x


class EchelonBasis:
    """Incremental basis that remembers which inserted vectors build each row.

    ``reduce`` returns the remainder of a vector together with the mask of
    inserted vectors whose sum was subtracted.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, tuple[int, int]] = {}
        self._count = 0
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def inserted(self) -> int:
        return self._count

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            p = v.bit_length() - 1
            hit = self._rows.get(p)
            if hit is None:
                # Leading bit is free; clear it locally and keep reducing lower bits.
                rest, c = self._reduce_below(v ^ (1 << p), p)
                return rest | (1 << p), combo ^ c
            v ^= hit[0]
            combo ^= hit[1]
        return 0, combo

    def _reduce_below(self, v: int, limit: int) -> tuple[int, int]:
        combo = 0
        out = 0
        while v:
            p = v.bit_length() - 1
            hit = self._rows.get(p)
            if hit is None:
                out |= 1 << p
                v ^= 1 << p
            else:
                v ^= hit[0]
                combo ^= hit[1]
        return out, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def add(self, v: int) -> bool:
        """Insert v; returns True when it enlarged the span."""
        idx = self._count
        self._count += 1
        rest, combo = self.reduce(v)
        if not rest:
            return False
        self._rows[rest.bit_length() - 1] = (rest, combo ^ (1 << idx))
        return True

    def express(self, v: int) -> int | None:
        """Mask of inserted vectors summing to v, or None if v is outside the span."""
        rest, combo = self.reduce(v)
        return combo if rest == 0 else None
