"""Linear algebra over GF(2) on bit-packed rows.

Vectors and matrix rows are Python ints used as bitsets: bit ``j`` is the
coefficient of basis element ``j``.  Addition is XOR, which CPython performs
word-at-a-time on the packed digits, so elimination cost is one XOR per
machine word per row operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CompositionNotZero


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class F2Vector:
    bits: int
    dim: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"vector does not fit in dimension {self.dim}")

    def __add__(self, other: F2Vector) -> F2Vector:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return F2Vector(self.bits ^ other.bits, self.dim)

    def __iter__(self) -> Iterator[int]:
        return (self.bits >> j & 1 for j in range(self.dim))

    def support(self) -> list[int]:
        return list(bits(self.bits))

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> F2Vector:
        value = 0
        for j, x in enumerate(entries):
            if x & 1:
                value |= 1 << j
        return cls(value, len(entries))


class F2Matrix:
    """Dense ``nrows x ncols`` matrix over GF(2), one packed int per row."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: Iterable[int] = ()):
        self.nrows = nrows
        self.ncols = ncols
        self.data = tuple(data) if data else (0,) * nrows
        if len(self.data) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(self.data)}")
        limit = 1 << ncols
        if any(r < 0 or r >= limit for r in self.data):
            raise ValueError(f"row does not fit in {ncols} columns")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, [F2Vector.from_list(r).bits for r in rows])

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> F2Matrix:
        """Build the matrix whose ``j``-th column is the bitset ``columns[j]``."""
        data = [0] * nrows
        for j, col in enumerate(columns):
            for i in bits(col):
                data[i] |= 1 << j
        return cls(nrows, len(columns), data)

    def to_dense(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.ncols)] for r in self.data]

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.data):
            for j in bits(r):
                cols[j] |= 1 << i
        return cols

    def transpose(self) -> F2Matrix:
        return F2Matrix(self.ncols, self.nrows, self.columns())

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.data:
            acc = 0
            for k in bits(r):
                acc ^= other.data[k]
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def apply(self, v: int) -> int:
        """Matrix-vector product with ``v`` given as a column bitset."""
        out = 0
        for i, r in enumerate(self.data):
            if popcount(r & v) & 1:
                out |= 1 << i
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.data))

    def __repr__(self) -> str:
        return f"F2Matrix({self.nrows}x{self.ncols})"


def echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduce ``vectors`` to a basis keyed by leading (highest) bit.

    Every stored vector has a distinct leading bit and that bit is absent from
    all other stored vectors' leading positions, so membership tests are a
    single downward sweep.
    """
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return basis


def reduce(v: int, basis: dict[int, int]) -> int:
    while v:
        lead = v.bit_length() - 1
        pivot = basis.get(lead)
        if pivot is None:
            return v
        v ^= pivot
    return 0


def span_rank(vectors: Iterable[int]) -> int:
    return len(echelon(vectors))


def rank(m: F2Matrix) -> int:
    return span_rank(m.data)


def kernel_basis(m: F2Matrix) -> list[F2Vector]:
    """Null space basis via elimination on the augmented columns ``[col_j | e_j]``."""
    n = m.ncols
    shift = n
    basis: dict[int, int] = {}
    kernel = []
    for j, col in enumerate(m.columns()):
        v = reduce((col << shift) | (1 << j), basis)
        if v >> shift:
            basis[v.bit_length() - 1] = v
        else:
            kernel.append(F2Vector(v, n))
    return kernel


def kernel_masks(columns: Sequence[int]) -> list[int]:
    """Kernel of the map sending basis vector ``j`` to ``columns[j]``."""
    n = len(columns)
    basis: dict[int, int] = {}
    kernel = []
    for j, col in enumerate(columns):
        v = reduce((col << n) | (1 << j), basis)
        if v >> n:
            basis[v.bit_length() - 1] = v
        else:
            kernel.append(v)
    return kernel


def homology_dimension(d_in: F2Matrix, d_out: F2Matrix) -> int:
    """``dim ker(d_out) - rank(d_in)`` for a composable pair with ``d_out d_in = 0``."""
    if d_in.nrows != d_out.ncols:
        raise ValueError(f"not composable: {d_in.shape} then {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out * d_in != 0")
    return d_out.ncols - rank(d_out) - rank(d_in)
