"""Dense linear algebra over GF(2).

Rows are stored as Python ints used as bitsets: column ``j`` is bit ``j``.
Lexicographic comparisons read column 0 first, so column 0 is the most
significant position when ordering vectors (this matches the eigenvector
column order of the canonicalization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InternalError, InvalidArgument


def _low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def vec_from_bits(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def bits_from_vec(v: int, length: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(length)], dtype=np.uint8)


def lex_key(v: int, length: int) -> int:
    """Integer whose natural order is the lexicographic order of ``v`` (column 0 first)."""
    out = 0
    for j in range(length):
        out = (out << 1) | ((v >> j) & 1)
    return out


@dataclass
class BitMatrix:
    """A ``len(rows) x cols`` matrix over GF(2)."""

    cols: int
    rows: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.cols < 0:
            raise InvalidArgument("cols must be non-negative")
        limit = 1 << self.cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise InvalidArgument(f"row {r:#x} does not fit in {self.cols} columns")

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2:
            raise InvalidArgument("expected a 2-d array")
        return cls(a.shape[1], [vec_from_bits(row) for row in a])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, [1 << j for j in range(n)])

    @classmethod
    def zeros(cls, nrows: int, cols: int) -> "BitMatrix":
        return cls(cols, [0] * nrows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = bits_from_vec(r, self.cols)
        return out

    def append(self, v: int) -> None:
        if v < 0 or v >= (1 << self.cols):
            raise InvalidArgument("row does not fit")
        self.rows.append(v)

    def matvec(self, v: int) -> int:
        """Return ``M @ v`` packed as an int (bit ``i`` = row ``i``)."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.cols, list(self.rows))

    def __str__(self) -> str:
        return "\n".join(
            "".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.rows
        )


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form. Returns ``(rref, rank, pivot_columns)``.

    Zero rows are dropped from the returned matrix, so ``rref.nrows == rank``.
    The RREF of a row space is unique, which makes it a canonical basis.
    """
    work = [r for r in m.rows if r]
    pivots: list[int] = []
    top = 0
    for col in range(m.cols):
        bit = 1 << col
        pivot = None
        for i in range(top, len(work)):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        work[top], work[pivot] = work[pivot], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return BitMatrix(m.cols, work[:top]), top, pivots


def rank(m: BitMatrix) -> int:
    return row_reduce(m)[1]


class EchelonBasis:
    """Incrementally maintained row basis with distinct lowest-set-bit pivots."""

    def __init__(self, cols: int):
        self.cols = cols
        self._by_pivot: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._by_pivot)

    def reduce(self, v: int) -> int:
        while v:
            p = _low_bit(v)
            row = self._by_pivot.get(p)
            if row is None:
                return v
            v ^= row
        return 0

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        r = self.reduce(v)
        if r == 0:
            return False
        self._by_pivot[_low_bit(r)] = r
        return True


def in_rowspace(m: BitMatrix, v: int | Sequence[int]) -> bool:
    if not isinstance(v, int):
        v = np.asarray(v)
        if v.shape != (m.cols,):
            raise InvalidArgument(f"vector length {v.shape} does not match {m.cols} columns")
        v = vec_from_bits(v)
    elif v < 0 or v >= (1 << m.cols):
        raise InvalidArgument("vector does not fit in the column count")
    basis = EchelonBasis(m.cols)
    for r in m.rows:
        basis.add(r)
    return basis.contains(v)


def nullspace(m: BitMatrix) -> BitMatrix:
    """Basis of ``{x : M x = 0}``, returned in RREF."""
    rref, _, pivots = row_reduce(m)
    pivot_set = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = 1 << f
        for row, p in zip(rref.rows, pivots):
            if (row >> f) & 1:
                x |= 1 << p
        out.append(x)
    return row_reduce(BitMatrix(m.cols, out))[0]


def parity_check(basis: BitMatrix) -> BitMatrix:
    """Matrix ``T`` whose kernel is exactly the row space of ``basis``.

    ``T`` is returned in RREF so it depends only on the subspace, not on the
    generators supplied.
    """
    return nullspace(basis)


def solve(E: BitMatrix, f: int | Sequence[int]) -> tuple[int, BitMatrix]:
    """Solve ``E s = f``. Returns a particular solution and a kernel basis of ``E``.

    ``f`` is packed with bit ``i`` holding the right-hand side of row ``i``.
    Raises InternalError for an inconsistent system: callers only hand over
    systems whose rows were filtered for independence.
    """
    if not isinstance(f, int):
        f = np.asarray(f)
        if f.shape != (E.nrows,):
            raise InvalidArgument("right-hand side length does not match row count")
        f = vec_from_bits(f)
    k = E.cols
    # augment with the rhs as column k
    aug = BitMatrix(k + 1, [r | (((f >> i) & 1) << k) for i, r in enumerate(E.rows)])
    rref, _, pivots = row_reduce(aug)
    if pivots and pivots[-1] == k:
        raise InternalError("inconsistent GF(2) system")
    s0 = 0
    for row, p in zip(rref.rows, pivots):
        if (row >> k) & 1:
            s0 |= 1 << p
    return s0, nullspace(E)


def lexmin_coset(s0: int, kernel: BitMatrix) -> int:
    """Lexicographically smallest element of ``s0 + span(kernel)``.

    With the kernel in RREF each pivot bit is controlled by exactly one basis
    vector, so clearing pivots in ascending order is optimal.
    """
    rref, _, pivots = row_reduce(kernel)
    s = s0
    for row, p in zip(rref.rows, pivots):
        if (s >> p) & 1:
            s ^= row
    return s


def span(m: BitMatrix) -> set[int]:
    """All vectors in the row space. Exponential; for tests and small inputs."""
    out = {0}
    for r in m.rows:
        out |= {x ^ r for x in out}
    return out
