"""Exact rational row reduction on sparse rows.

Rows are ``{column: Fraction}`` dicts with zero entries omitted. The echelon
form is kept fully reduced while rows are inserted, so the rank is known at
every step and insertion can stop early once it reaches the column count.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

SparseRow = dict[int, Fraction]


class Echelon:
    """Reduced row-echelon form built incrementally."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: SparseRow) -> SparseRow:
        row = {c: Fraction(v) for c, v in row.items() if v != 0}
        # reducing by a pivot row only touches free columns, so one pass suffices
        for p in [c for c in row if c in self.pivots]:
            factor = row.get(p)
            if not factor:
                continue
            for c, v in self.pivots[p].items():
                new = row.get(c, 0) - factor * v
                if new:
                    row[c] = new
                else:
                    row.pop(c, None)
        return row

    def insert(self, row: SparseRow) -> bool:
        """Add a row; return True if it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        lead = row[p]
        row = {c: v / lead for c, v in row.items()}
        for other in self.pivots.values():
            factor = other.get(p)
            if factor:
                for c, v in row.items():
                    new = other.get(c, 0) - factor * v
                    if new:
                        other[c] = new
                    else:
                        other.pop(c, None)
        self.pivots[p] = row
        return True

    def extend(self, rows: Iterable[SparseRow]) -> "Echelon":
        for row in rows:
            if self.rank == self.ncols:
                break
            self.insert(row)
        return self

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def nullspace(self) -> list[SparseRow]:
        """Kernel basis, one vector per free column in ascending order."""
        basis = []
        for f in self.free_columns():
            v: SparseRow = {f: Fraction(1)}
            for p, row in self.pivots.items():
                if f in row:
                    v[p] = -row[f]
            basis.append(v)
        return basis


def solve_unique(rows: Iterable[SparseRow], rhs: Iterable[Fraction], ncols: int) -> list[Fraction] | None:
    """Unique exact solution of ``M x = b``, or None if inconsistent or underdetermined."""
    ech = Echelon(ncols + 1)
    for row, b in zip(rows, rhs):
        aug = dict(row)
        if b:
            aug[ncols] = Fraction(b)
        ech.insert(aug)
    if ncols in ech.pivots or ech.rank != ncols:
        return None
    return [ech.pivots[c].get(ncols, Fraction(0)) for c in range(ncols)]
