"""Finite graded cochain complexes over GF(2) with an optional length filtration.

Used for hom complexes, Hochschild complexes and bar-type quotient homs.  The
differential raises degree by one and never increases length, so each
length-truncation ``F_L`` is a subcomplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import f2linalg as f2
from .errors import DifferentialNotSquareZero


@dataclass
class FiniteComplex:
    degrees: Sequence[int]
    differential: Sequence[int]
    lengths: Sequence[int] | None = None
    labels: Sequence[str] | None = None
    _by_degree: dict[int, list[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.differential) != len(self.degrees):
            raise ValueError("differential and degree lists differ in size")
        if self.lengths is None:
            self.lengths = [0] * len(self.degrees)
        self._by_degree = {}
        for i, k in enumerate(self.degrees):
            self._by_degree.setdefault(k, []).append(i)

    def __len__(self) -> int:
        return len(self.degrees)

    def basis(self, degree: int, max_length: int | None = None) -> list[int]:
        idx = self._by_degree.get(degree, [])
        if max_length is None:
            return idx
        return [i for i in idx if self.lengths[i] <= max_length]

    def apply(self, mask: int) -> int:
        out = 0
        for i in f2.bits(mask):
            out ^= self.differential[i]
        return out

    def square_zero_violations(self) -> list[int]:
        return [i for i in range(len(self)) if self.apply(self.differential[i])]

    def check_square_zero(self) -> None:
        bad = self.square_zero_violations()
        if bad:
            name = self.labels[bad[0]] if self.labels else str(bad[0])
            raise DifferentialNotSquareZero(f"d^2 != 0 on {name} ({len(bad)} basis elements)")

    def cycles(self, degree: int, max_length: int | None = None) -> list[int]:
        idx = self.basis(degree, max_length)
        ker = f2.kernel_masks([self.differential[i] for i in idx])
        return [_lift(v, idx) for v in ker]

    def boundaries(self, degree: int, max_length: int | None = None) -> list[int]:
        return [self.differential[i] for i in self.basis(degree - 1, max_length)]

    def persistent_dim(self, degree: int, cycle_level: int | None, boundary_level: int | None) -> int:
        """Rank of ``H(F_cycle_level) -> H(F_boundary_level)`` in ``degree``."""
        z = self.cycles(degree, cycle_level)
        bd = self.boundaries(degree, boundary_level)
        # dim Z - dim(Z cap B) = dim(Z + B) - dim B
        return f2.span_rank(z + bd) - f2.span_rank(bd)

    def homology(self, window: Sequence[int]) -> dict[int, int]:
        return {k: self.persistent_dim(k, None, None) for k in window}

    def truncated_homology(self, window: Sequence[int], level: int) -> dict[int, int]:
        """Classes supported in length ``< level`` that survive into ``F_level``."""
        return {k: self.persistent_dim(k, level - 1, level) for k in window}

    def homology_basis(self, degree: int) -> list[int]:
        """Cycles whose classes form a basis of homology in ``degree``."""
        basis = f2.echelon(self.boundaries(degree))
        reps = []
        for z in self.cycles(degree):
            r = f2.reduce(z, basis)
            if r:
                basis[r.bit_length() - 1] = r
                reps.append(z)
        return reps

    def is_boundary(self, mask: int, degree: int) -> bool:
        return f2.reduce(mask, f2.echelon(self.boundaries(degree))) == 0


def _lift(v: int, idx: Sequence[int]) -> int:
    out = 0
    for j in f2.bits(v):
        out |= 1 << idx[j]
    return out


def induced_map_report(
    source: FiniteComplex,
    target: FiniteComplex,
    chain_map: Callable[[int], int],
    window: Sequence[int],
) -> dict[int, dict[str, int | bool]]:
    """Per degree: homology dims on both sides, rank of the induced map, iso flag."""
    out = {}
    for k in window:
        h_src = source.homology_basis(k)
        b_tgt = target.boundaries(k)
        images = [chain_map(z) for z in h_src]
        rb = f2.span_rank(b_tgt)
        induced_rank = f2.span_rank(b_tgt + images) - rb
        dim_tgt = len(target.cycles(k)) - rb
        out[k] = {
            "source": len(h_src),
            "target": dim_tgt,
            "rank": induced_rank,
            "iso": induced_rank == len(h_src) == dim_tgt,
        }
    return out


@dataclass(frozen=True)
class TableEntry:
    dim: int
    stable: bool


def stability_table(cx: FiniteComplex, window: Sequence[int], level: int | None) -> dict[int, TableEntry]:
    """Homology per degree with a flag for whether it moved at the last length step.

    With ``level=None`` the complex is taken whole and every entry is stable.
    Otherwise the value at ``level`` counts classes already present in length
    ``level - 1`` that survive into length ``level``; classes born at the top
    length are not counted, since their killers may lie just past the cut.
    """
    if level is None:
        return {k: TableEntry(v, True) for k, v in cx.homology(window).items()}
    now = cx.truncated_homology(window, level)
    before = cx.truncated_homology(window, level - 1)
    return {k: TableEntry(now[k], now[k] == before[k]) for k in window}
