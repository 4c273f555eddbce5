"""Sparse integer matrices and their Smith normal form.

Entries are Python ints, so elimination never overflows.  The elimination
first exhausts +-1 pivots (cheap, and the common case for Khovanov
differentials), choosing short rows and short columns to limit fill-in, and
then finishes the remainder with smallest-entry gcd pivoting.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple


@dataclass
class SparseIntMatrix:
    """Column-major sparse matrix: ``cols[c]`` maps row index to a nonzero value."""

    nrows: int
    ncols: int
    cols: List[Dict[int, int]]

    def __post_init__(self):
        if len(self.cols) != self.ncols:
            raise ValueError(f"expected {self.ncols} columns, got {len(self.cols)}")
        for col in self.cols:
            for r, v in list(col.items()):
                if not 0 <= r < self.nrows:
                    raise IndexError(f"row {r} out of range for {self.nrows} rows")
                if v == 0:
                    del col[r]

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseIntMatrix":
        return cls(nrows, ncols, [{} for _ in range(ncols)])

    @classmethod
    def from_entries(cls, nrows: int, ncols: int,
                     entries: Iterable[Tuple[int, int, int]]) -> "SparseIntMatrix":
        cols: List[Dict[int, int]] = [{} for _ in range(ncols)]
        for r, c, v in entries:
            if not 0 <= c < ncols:
                raise IndexError(f"column {c} out of range for {ncols} columns")
            cols[c][r] = cols[c].get(r, 0) + v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int = None) -> "SparseIntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        return cls.from_entries(nrows, ncols, ((r, c, v) for r, row in enumerate(rows)
                                               for c, v in enumerate(row) if v))

    def entries(self) -> Iterator[Tuple[int, int, int]]:
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                yield r, c, v

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self.cols)

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix.from_entries(self.ncols, self.nrows,
                                            ((c, r, v) for r, c, v in self.entries()))

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for ocol in other.cols:
            acc: Dict[int, int] = {}
            for k, v in ocol.items():
                for r, w in self.cols[k].items():
                    acc[r] = acc.get(r, 0) + w * v
            cols.append({r: v for r, v in acc.items() if v})
        return SparseIntMatrix(self.nrows, other.ncols, cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def is_zero(self) -> bool:
        return all(not col for col in self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division."""
    n = abs(n)
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primary_decomposition(factors: Iterable[int]) -> Tuple[int, ...]:
    """Prime powers ``p^e`` of the group ``sum Z_d``, sorted ascending."""
    out = []
    for d in factors:
        for p, e in factorize(d).items():
            out.append(p ** e)
    return tuple(sorted(out))


def invariant_factors_from_diagonal(diagonal: Iterable[int]) -> Tuple[int, ...]:
    """Turn any diagonal presentation into the chain ``d_1 | d_2 | ...``.

    The number of factors is preserved (units included), so the result also
    carries the rank.
    """
    diagonal = [abs(d) for d in diagonal]
    if any(d == 0 for d in diagonal):
        raise ValueError("diagonal entries must be nonzero")
    exps: Dict[int, List[int]] = {}
    for d in diagonal:
        if d > 1:
            for p, e in factorize(d).items():
                exps.setdefault(p, []).append(e)
    r = len(diagonal)
    chain = [1] * r
    for p, es in exps.items():
        es.sort(reverse=True)
        for k, e in enumerate(es):
            chain[r - 1 - k] *= p ** e
    return tuple(chain)


class _Eliminator:
    """Row/column dual index over the nonzero entries of a matrix."""

    def __init__(self, matrix: SparseIntMatrix):
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, Dict[int, int]] = {}
        for c, col in enumerate(matrix.cols):
            if col:
                self.cols[c] = dict(col)
                for r, v in col.items():
                    self.rows.setdefault(r, {})[c] = v
        self.diagonal: List[int] = []
        self._heap: List[Tuple[int, int]] = [(len(row), r) for r, row in self.rows.items()]
        heapq.heapify(self._heap)

    def _set(self, r: int, c: int, v: int):
        if v:
            self.rows[r][c] = v
            self.cols[c][r] = v
        else:
            self.rows[r].pop(c, None)
            col = self.cols.get(c)
            if col is not None:
                col.pop(r, None)
                if not col:
                    del self.cols[c]

    def _drop(self, r: int, c: int):
        """Remove pivot row ``r`` and column ``c`` once column ``c`` is clear elsewhere."""
        for c2 in self.rows.pop(r):
            col = self.cols.get(c2)
            if col is not None:
                col.pop(r, None)
                if not col:
                    del self.cols[c2]

    def _row_axpy(self, target: int, factor: int, source_row: Dict[int, int]):
        """``row[target] -= factor * source_row``."""
        row = self.rows[target]
        for c2, pv in source_row.items():
            self._set(target, c2, row.get(c2, 0) - factor * pv)
        if not row:
            del self.rows[target]
        else:
            heapq.heappush(self._heap, (len(row), target))

    def unit_phase(self):
        while self._heap:
            length, r = heapq.heappop(self._heap)
            row = self.rows.get(r)
            if row is None or len(row) != length:
                continue
            best = None
            for c, v in row.items():
                if v == 1 or v == -1:
                    clen = len(self.cols[c])
                    if best is None or clen < best[0]:
                        best = (clen, c, v)
                        if clen == 1:
                            break
            if best is None:
                continue
            _, c, u = best
            prow = dict(row)
            for r2, v in list(self.cols[c].items()):
                if r2 != r:
                    self._row_axpy(r2, v * u, prow)
            self._drop(r, c)
            self.diagonal.append(1)

    def _min_entry(self, entries: Iterable[Tuple[int, int, int]]):
        best = None
        for r, c, v in entries:
            if best is None or abs(v) < abs(best[2]):
                best = (r, c, v)
                if abs(v) == 1:
                    break
        return best

    def general_phase(self):
        while self.rows:
            r, c, p = self._min_entry((r, c, v) for r, row in self.rows.items()
                                      for c, v in row.items())
            while True:
                # clear column c with row operations
                restart = None
                prow = dict(self.rows[r])
                for r2, v in list(self.cols[c].items()):
                    if r2 == r:
                        continue
                    q = v // p
                    self._row_axpy(r2, q, prow)
                    rem = self.rows.get(r2, {}).get(c, 0)
                    if rem and (restart is None or abs(rem) < abs(restart[2])):
                        restart = (r2, c, rem)
                if restart is not None:
                    r, c, p = restart
                    continue
                # column c now holds only p: column ops touch row r alone
                for c2, v in list(self.rows[r].items()):
                    if c2 == c:
                        continue
                    rem = v - (v // p) * p
                    self._set(r, c2, rem)
                    if rem and (restart is None or abs(rem) < abs(restart[2])):
                        restart = (r, c2, rem)
                if restart is not None:
                    r, c, p = restart
                    continue
                self._drop(r, c)
                self.diagonal.append(abs(p))
                break


def smith_normal_form(matrix: SparseIntMatrix) -> SNFResult:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of an integer matrix."""
    elim = _Eliminator(matrix)
    elim.unit_phase()
    elim.general_phase()
    return SNFResult(invariant_factors_from_diagonal(elim.diagonal))


def rank(matrix: SparseIntMatrix) -> int:
    return smith_normal_form(matrix).rank
