"""Sparse exact linear algebra over the rationals.

The whole engine reduces to three primitives on sparse rational matrices:
reduced row echelon form (for ideal slices and normal forms), kernel bases
(for brute-force cross-checks), and rank (for cohomology dimensions).

Design notes:

* ``rref`` returns *the* reduced row echelon form, which is unique for a
  given row space; every module downstream relies on that for
  determinism.  Pivot columns are therefore the canonical (leftmost)
  ones; within a column the pivot row is chosen Markowitz-style (fewest
  nonzeros) to limit fill-in, which does not affect the result.
* ``rank`` may pick pivots anywhere (full Markowitz) since only the count
  matters; that is noticeably better on the wider differential matrices.
* ``rank_with_modular_prescreen`` first computes the rank modulo a
  word-size prime.  A mod-p rank equal to ``min(nrows, ncols)`` is
  already an exact certificate (mod-p rank never exceeds the rational
  rank); otherwise the exact elimination runs and its value is returned.

All functions are pure: inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .rat import ONE, Rational

# Mersenne prime 2^61 - 1: fits in a machine word, far beyond any
# denominator produced by the model builders.
_PRESCREEN_PRIME = (1 << 61) - 1


class SparseMatrix:
    """Immutable sparse matrix over Q; no explicit zeros are stored."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int,
                 entries: Iterable[tuple[int, int, object]] = ()):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        rows: list[dict[int, object]] = [dict() for _ in range(nrows)]
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ValueError(f"entry ({i},{j}) out of bounds "
                                 f"for {nrows}x{ncols} matrix")
            v = Rational(v)
            if v:
                rows[i][j] = v
            else:
                rows[i].pop(j, None)
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_rows(cls, nrows: int, ncols: int,
                  rows: Iterable[dict[int, object]]) -> "SparseMatrix":
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            m.rows[i] = {j: Rational(v) for j, v in row.items() if v}
        return m

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        return cls(nrows, ncols,
                   ((i, j, v) for i, r in enumerate(dense)
                    for j, v in enumerate(r) if v))

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, Rational(0))

    def triples(self):
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows,
                            ((j, i, v) for i, j, v in self.triples()))

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc: dict[int, object] = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    s = acc.get(j)
                    s = v * w if s is None else s + v * w
                    if s:
                        acc[j] = s
                    else:
                        acc.pop(j, None)
            out.rows[i] = acc
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def to_dense(self):
        zero = Rational(0)
        return [[self.rows[i].get(j, zero) for j in range(self.ncols)]
                for i in range(self.nrows)]

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.rows == other.rows)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


@dataclass(frozen=True)
class RrefResult:
    rank: int
    pivots: tuple[int, ...]
    reduced: SparseMatrix


def rref(m: SparseMatrix) -> RrefResult:
    """Reduced row echelon form of ``m`` (unique; rows sorted by pivot)."""
    work = [dict(r) for r in m.rows if r]
    # column -> set of live row ids, kept current during elimination
    col_rows: dict[int, set[int]] = {}
    for ri, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(ri)
    pivots: list[int] = []
    pivot_rows: list[int] = []
    pivot_of_row: dict[int, int] = {}
    for col in sorted(col_rows):
        candidates = [ri for ri in col_rows.get(col, ()) if ri not in pivot_of_row]
        if not candidates:
            continue
        ri = min(candidates, key=lambda r: (len(work[r]), r))
        prow = work[ri]
        inv = ONE / prow[col]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
        for other in list(col_rows[col]):
            if other == ri:
                continue
            orow = work[other]
            factor = orow[col]
            for c, v in prow.items():
                nv = orow.get(c)
                nv = -factor * v if nv is None else nv - factor * v
                if nv:
                    if c not in orow:
                        col_rows.setdefault(c, set()).add(other)
                    orow[c] = nv
                else:
                    if c in orow:
                        del orow[c]
                        col_rows[c].discard(other)
        pivots.append(col)
        pivot_rows.append(ri)
        pivot_of_row[ri] = col
    reduced = SparseMatrix(len(pivots), m.ncols)
    for out_i, ri in enumerate(pivot_rows):
        reduced.rows[out_i] = work[ri]
    return RrefResult(len(pivots), tuple(pivots), reduced)


def kernel_basis(m: SparseMatrix) -> list[dict[int, object]]:
    """Basis of ``{v : m v = 0}`` as sparse column vectors.

    One vector per non-pivot column ``f`` of the rref, in ascending column
    order: ``v[f] = 1`` and ``v[p] = -reduced[row(p)][f]`` for each pivot
    column ``p``.
    """
    res = rref(m)
    pivot_set = set(res.pivots)
    basis: list[dict[int, object]] = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        vec: dict[int, object] = {f: ONE}
        for ri, p in enumerate(res.pivots):
            coeff = res.reduced.rows[ri].get(f)
            if coeff:
                vec[p] = -coeff
        basis.append(vec)
    return basis


def rank(m: SparseMatrix) -> int:
    """Exact rank, free Markowitz-style pivoting (no canonical form).

    Each step pivots in the sparsest live column, on that column's
    sparsest row.  This keeps fill-in low on the wide differential
    matrices where the canonical left-to-right sweep would clog.
    """
    work = [dict(r) for r in m.rows if r]
    col_rows: dict[int, set[int]] = {}
    for ri, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(ri)
    rk = 0
    while col_rows:
        col = min(col_rows, key=lambda c: (len(col_rows[c]), c))
        rows_here = col_rows[col]
        ri = min(rows_here, key=lambda r: (len(work[r]), r))
        prow = work[ri]
        inv = ONE / prow[col]
        for c in prow:
            s = col_rows[c]
            s.discard(ri)
            if not s:
                del col_rows[c]
        for other in list(col_rows.get(col, ())):
            orow = work[other]
            factor = orow[col] * inv
            for c, v in prow.items():
                nv = orow.get(c)
                nv = -factor * v if nv is None else nv - factor * v
                if nv:
                    if c not in orow:
                        col_rows.setdefault(c, set()).add(other)
                    orow[c] = nv
                else:
                    if c in orow:
                        del orow[c]
                        s = col_rows[c]
                        s.discard(other)
                        if not s:
                            del col_rows[c]
        rk += 1
    return rk


def _modular_rank(m: SparseMatrix, p: int = _PRESCREEN_PRIME) -> int:
    """Rank of ``m`` over F_p; a lower bound for the rank over Q.

    Rows are scaled to p-integral form first (row scaling preserves rank),
    so the bound is valid for arbitrary rational entries.
    """
    work = []
    for row in m.rows:
        if not row:
            continue
        lcm = 1
        for v in row.values():
            d = int(v.denominator)
            lcm = lcm // gcd(lcm, d) * d
        red = {}
        for c, v in row.items():
            x = (int(v.numerator) * (lcm // int(v.denominator))) % p
            if x:
                red[c] = x
        if red:
            work.append(red)
    col_rows: dict[int, set[int]] = {}
    for ri, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(ri)
    rk = 0
    while col_rows:
        col = min(col_rows, key=lambda c: (len(col_rows[c]), c))
        ri = min(col_rows[col], key=lambda r: (len(work[r]), r))
        prow = work[ri]
        inv = pow(prow[col], p - 2, p)
        for c in prow:
            s = col_rows[c]
            s.discard(ri)
            if not s:
                del col_rows[c]
        for other in list(col_rows.get(col, ())):
            orow = work[other]
            factor = (orow[col] * inv) % p
            for c, v in prow.items():
                nv = (orow.get(c, 0) - factor * v) % p
                if nv:
                    if c not in orow:
                        col_rows.setdefault(c, set()).add(other)
                    orow[c] = nv
                else:
                    if c in orow:
                        del orow[c]
                        s = col_rows[c]
                        s.discard(other)
                        if not s:
                            del col_rows[c]
        rk += 1
    return rk


def rank_with_modular_prescreen(m: SparseMatrix) -> int:
    """Exact rank; a full-rank mod-p prescreen short-circuits elimination.

    The mod-p rank never exceeds the rational rank, so when it reaches
    ``min(nrows, ncols)`` it certifies the answer by itself.  Every other
    case is settled by exact arithmetic.
    """
    bound = min(m.nrows, m.ncols)
    if bound == 0:
        return 0
    if _modular_rank(m) == bound:
        return bound
    return rank(m)
