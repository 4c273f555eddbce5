"""Integral homology of the enhanced-state complex.

Framed groups ``H_{a,b}`` are computed slice by slice (the differential
preserves ``b``), optionally after cancelling every +-1 entry of the
differential at chain level.  Classical groups use
``H^{i,j} = H_{w-2i, 3w-2j}``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Optional, Tuple

from .cube import (DEFAULT_MAX_GENERATORS, BigradedComplex, Cube, _quantum_gradings,
                   build_slice, check_guard)
from .diagram import SmoothedBraidWord, oriented_writhe
from .linalg import (SNFResult, SparseIntMatrix, invariant_factors_from_diagonal,
                     primary_decomposition, smith_normal_form)
from .poly import Laurent

log = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z_{d_1} + ... + Z_{d_k}`` with ``d_1 | d_2 | ...``."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        if any(d < 1 for d in self.torsion):
            raise ValueError("torsion orders must be positive")
        chain = invariant_factors_from_diagonal(self.torsion)
        object.__setattr__(self, "torsion", tuple(d for d in chain if d > 1))

    @property
    def primary(self) -> Tuple[int, ...]:
        return primary_decomposition(self.torsion)

    def has_summand(self, prime_power: int) -> bool:
        """True if ``Z_{p^e}`` occurs in the primary decomposition."""
        return prime_power in self.primary

    @property
    def torsion_part(self) -> "AbelianGroup":
        return AbelianGroup(0, self.torsion)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        text = text.strip()
        if text in ("", "0"):
            return cls()
        free = 0
        tors = []
        for part in text.split("+"):
            part = part.strip()
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z_(\d+)(?:\^(\d+))?", part)
            if m:
                tors.extend([int(m.group(1))] * int(m.group(2) or 1))
                continue
            raise ValueError(f"cannot parse group summand {part!r}")
        return cls(free, tuple(tors))


ZERO = AbelianGroup()
Z = AbelianGroup(1)


class _Table:
    """Sparse map from bidegree to group; absent keys are the zero group."""

    groups: Dict[Bidegree, AbelianGroup]

    def __getitem__(self, key: Bidegree) -> AbelianGroup:
        return self.groups.get(tuple(key), ZERO)

    def __iter__(self):
        return iter(sorted(self.groups))

    def items(self):
        return sorted(self.groups.items())

    def nonzero(self) -> Dict[Bidegree, AbelianGroup]:
        return {k: g for k, g in self.groups.items() if not g.is_zero()}

    def same_groups(self, other: "_Table") -> bool:
        return self.nonzero() == other.nonzero()

    def torsion_bidegrees(self, prime_power: Optional[int] = None):
        return sorted(k for k, g in self.groups.items()
                      if g.torsion and (prime_power is None or g.has_summand(prime_power)))


@dataclass
class FramedHomologyTable(_Table):
    groups: Dict[Bidegree, AbelianGroup]
    writhe: Optional[int] = None
    complete: bool = True


@dataclass
class ClassicalHomologyTable(_Table):
    groups: Dict[Bidegree, AbelianGroup]
    reduced: bool = False
    complete: bool = True

    def shifted(self, di: int, dj: int) -> "ClassicalHomologyTable":
        return ClassicalHomologyTable({(i + di, j + dj): g for (i, j), g in self.groups.items()},
                                      self.reduced, self.complete)


class HomologyError(ValueError):
    pass


# -- single bidegree ----------------------------------------------------------

def _group(dim: int, rank_out: int, snf_in: SNFResult) -> AbelianGroup:
    free = dim - rank_out - snf_in.rank
    if free < 0:
        raise HomologyError("ranks exceed dimension; not a chain complex")
    return AbelianGroup(free, snf_in.torsion)


def homology_at(d_out: SparseIntMatrix, d_in: SparseIntMatrix, dim: int,
                check: bool = True) -> AbelianGroup:
    """``ker(d_out) / im(d_in)`` at a chain group of rank ``dim``."""
    if d_out.ncols != dim or d_in.nrows != dim:
        raise HomologyError(
            f"dimension mismatch: d_out is {d_out.shape}, d_in is {d_in.shape}, dim {dim}")
    if check and not (d_out @ d_in).is_zero():
        raise HomologyError("d_out . d_in is not zero")
    return _group(dim, smith_normal_form(d_out).rank, smith_normal_form(d_in))


# -- chain-level cancellation ------------------------------------------------

def _reduce_slice(levels: Dict[int, list], diffs: Dict[int, SparseIntMatrix]):
    """Cancel +-1 entries of one quantum slice.

    ``levels[a]`` lists generator labels, ``diffs[a]`` is ``C_a -> C_{a-2}``.
    Returns the surviving labels and the updated matrices in the same shape.
    """
    gid_of = {}
    label = []
    degree = []
    for a in sorted(levels, reverse=True):
        for idx, g in enumerate(levels[a]):
            gid_of[(a, idx)] = len(label)
            label.append(g)
            degree.append(a)
    n = len(label)
    out = [dict() for _ in range(n)]
    inn = [dict() for _ in range(n)]
    for a, mat in diffs.items():
        for c, col in enumerate(mat.cols):
            src = gid_of[(a, c)]
            o = out[src]
            for r, v in col.items():
                tgt = gid_of[(a - 2, r)]
                o[tgt] = v
                inn[tgt][src] = v

    alive = [True] * n
    cancelled = 0

    def cancel(x, y, u):
        ox = out[x]
        iy = inn[y]
        out[x] = {}
        inn[y] = {}
        del ox[y]
        del iy[x]
        for w in ox:
            del inn[w][x]
        for z in inn[x]:
            del out[z][x]
        inn[x] = {}
        for w in out[y]:
            del inn[w][y]
        out[y] = {}
        for z, zy in iy.items():
            oz = out[z]
            del oz[y]
            f = zy * u
            for w, xw in ox.items():
                nv = oz.get(w, 0) - f * xw
                if nv:
                    oz[w] = nv
                    inn[w][z] = nv
                else:
                    oz.pop(w, None)
                    inn[w].pop(z, None)
        alive[x] = alive[y] = False

    progress = True
    while progress:
        progress = False
        for x in range(n):
            while alive[x]:
                best = None
                for y, v in out[x].items():
                    if v == 1 or v == -1:
                        cost = len(inn[y])
                        if best is None or cost < best[0]:
                            best = (cost, y, v)
                            if cost == 1:
                                break
                if best is None:
                    break
                cancel(x, best[1], best[2])
                cancelled += 1
                progress = True

    new_levels: Dict[int, list] = {}
    new_index = {}
    for g in range(n):
        if alive[g]:
            a = degree[g]
            bucket = new_levels.setdefault(a, [])
            new_index[g] = len(bucket)
            bucket.append(label[g])
    new_diffs = {}
    for a in new_levels:
        if a - 2 not in new_levels:
            continue
        cols = []
        for g in range(n):
            if alive[g] and degree[g] == a:
                cols.append({new_index[w]: v for w, v in out[g].items()})
        new_diffs[a] = SparseIntMatrix(len(new_levels[a - 2]), len(new_levels[a]), cols)
    return new_levels, new_diffs, cancelled


def unit_pivot_reduce(complex_: BigradedComplex) -> BigradedComplex:
    """Smaller complex with the same homology at every bidegree.

    Repeatedly picks a +-1 entry ``d(x) -> y``, deletes ``x`` and ``y`` and
    replaces ``d(z)`` by ``d(z) - d(z)_y * u * d(x)`` for every ``z`` hitting
    ``y``.  The surviving generators keep their original labels.
    """
    by_b: Dict[int, Dict[int, list]] = {}
    for (a, b), gens in complex_.generators.items():
        by_b.setdefault(b, {})[a] = gens
    gens_out: Dict = {}
    diffs_out: Dict = {}
    for b, levels in by_b.items():
        diffs = {a: complex_.differentials[(a, b)] for a in levels
                 if (a, b) in complex_.differentials}
        new_levels, new_diffs, _ = _reduce_slice(levels, diffs)
        for a, g in new_levels.items():
            gens_out[(a, b)] = g
        for a, d in new_diffs.items():
            diffs_out[(a, b)] = d
    return BigradedComplex(complex_.word, gens_out, diffs_out)


def complex_homology(complex_: BigradedComplex) -> Dict[Bidegree, AbelianGroup]:
    """Nonzero homology groups of an explicit complex."""
    snfs: Dict[Bidegree, SNFResult] = {}

    def snf(a, b):
        key = (a, b)
        if key not in snfs:
            snfs[key] = smith_normal_form(complex_.differential(a, b))
        return snfs[key]

    out = {}
    for (a, b) in complex_.bidegrees:
        dim = complex_.rank(a, b)
        grp = _group(dim, snf(a, b).rank, snf(a + 2, b))
        if not grp.is_zero():
            out[(a, b)] = grp
    return out


# -- whole diagrams -------------------------------------------------------------

def _slice_homology(cube: Cube, b: int, reduce: bool, basepoint=None):
    piece = build_slice(cube, b, basepoint)
    size = piece.size
    if reduce:
        piece = unit_pivot_reduce(piece)
    log.debug("slice b=%d: %d generators, %d after reduction", b, size, piece.size)
    return complex_homology(piece)


def _framed_pipeline(word: SmoothedBraidWord, reduce: bool, b_filter, max_generators,
                     basepoint=None, crossing_order=None
                     ) -> Tuple[Dict[Bidegree, AbelianGroup], bool]:
    check_guard(word, max_generators)
    cube = Cube(word, crossing_order)
    bs = _quantum_gradings(cube)
    complete = True
    if b_filter is not None:
        keep = b_filter if callable(b_filter) else set(b_filter).__contains__
        bs = [b for b in bs if keep(b)]
        complete = False
    groups: Dict[Bidegree, AbelianGroup] = {}
    for b in bs:
        groups.update(_slice_homology(cube, b, reduce, basepoint))
    return groups, complete


def full_homology(word: SmoothedBraidWord, reduce: bool = True,
                  b_filter: Optional[Iterable[int] | Callable[[int], bool]] = None,
                  max_generators: Optional[int] = DEFAULT_MAX_GENERATORS,
                  crossing_order: Optional[Sequence[int]] = None) -> FramedHomologyTable:
    """Framed groups ``H_{a,b}`` of the closure of ``word``.

    ``b_filter`` restricts the computation to some quantum gradings; the
    resulting table is flagged incomplete.  ``crossing_order`` changes the
    order used by the differential's sign rule, which must not matter.
    """
    groups, complete = _framed_pipeline(word, reduce, b_filter, max_generators,
                                        crossing_order=crossing_order)
    return FramedHomologyTable(groups, oriented_writhe(word), complete)


def to_classical(framed: FramedHomologyTable, w: Optional[int] = None) -> ClassicalHomologyTable:
    """``(a, b) -> ((w - a) / 2, (3w - b) / 2)``."""
    w = framed.writhe if w is None else w
    if w is None:
        raise HomologyError("writhe required for the classical conversion")
    out = {}
    for (a, b), g in framed.groups.items():
        if (w - a) % 2 or (3 * w - b) % 2:
            raise HomologyError(f"writhe {w} has the wrong parity for bidegree {(a, b)}")
        out[((w - a) // 2, (3 * w - b) // 2)] = g
    return ClassicalHomologyTable(out, False, framed.complete)


def to_framed(classical: ClassicalHomologyTable, w: int) -> FramedHomologyTable:
    """``(i, j) -> (w - 2i, 3w - 2j)``."""
    return FramedHomologyTable({(w - 2 * i, 3 * w - 2 * j): g
                                for (i, j), g in classical.groups.items()}, w, classical.complete)


def framing_shift(framed: FramedHomologyTable, nu: int) -> FramedHomologyTable:
    """Change of blackboard framing by ``nu``: ``(a, b) -> (a + nu, b + 3 nu)``."""
    w = None if framed.writhe is None else framed.writhe + nu
    return FramedHomologyTable({(a + nu, b + 3 * nu): g for (a, b), g in framed.groups.items()},
                               w, framed.complete)


def classical_homology(word: SmoothedBraidWord, reduce: bool = True,
                       max_generators: Optional[int] = DEFAULT_MAX_GENERATORS,
                       bidegrees: Optional[Iterable[Bidegree]] = None) -> ClassicalHomologyTable:
    """Classical ``H^{i,j}``; ``bidegrees`` limits the work to the slices they need."""
    w = oriented_writhe(word)
    b_filter = None
    if bidegrees is not None:
        b_filter = {3 * w - 2 * j for _, j in bidegrees}
    return to_classical(full_homology(word, reduce, b_filter, max_generators), w)


def reduced_homology(word: SmoothedBraidWord, basepoint: int = 1, reduce: bool = True,
                     basepoint_sign: int = -1,
                     max_generators: Optional[int] = DEFAULT_MAX_GENERATORS
                     ) -> ClassicalHomologyTable:
    """Reduced groups from the generators whose basepoint circle has a fixed sign.

    ``basepoint`` is a 1-based strand position; the marked point sits on that
    strand above the first letter.  With sign ``-1`` the generators span the
    quotient by the ``+1`` subcomplex and ``j`` is shifted by ``-1``; with
    sign ``+1`` they span that subcomplex and ``j`` is shifted by ``+1``.
    Both put the unknot at ``(0, 0)`` and give the same table.
    """
    if not 1 <= basepoint <= word.strand_count:
        raise HomologyError(f"basepoint strand {basepoint} out of range")
    if basepoint_sign not in (1, -1):
        raise HomologyError("basepoint sign must be +1 or -1")
    groups, _ = _framed_pipeline(word, reduce, None, max_generators,
                                 basepoint=(basepoint - 1, basepoint_sign))
    w = oriented_writhe(word)
    shift = basepoint_sign
    table = to_classical(FramedHomologyTable(groups, w), w)
    return ClassicalHomologyTable({(i, j + shift): g for (i, j), g in table.groups.items()},
                                  reduced=True)


# -- Euler characteristics -------------------------------------------------------

def euler_polynomial(table: FramedHomologyTable) -> Laurent:
    """``sum (-1)^((b-a)/2) rank H_{a,b} A^b``; equals the Kauffman bracket."""
    if not table.complete:
        raise HomologyError("Euler characteristic needs a complete table")
    out: Dict[int, int] = {}
    for (a, b), g in table.groups.items():
        sign = -1 if ((b - a) // 2) % 2 else 1
        out[b] = out.get(b, 0) + sign * g.free_rank
    return Laurent(out)


def q_euler_polynomial(table: ClassicalHomologyTable) -> Laurent:
    """``sum (-1)^i q^j rank H^{i,j}``."""
    if not table.complete:
        raise HomologyError("Euler characteristic needs a complete table")
    out: Dict[int, int] = {}
    for (i, j), g in table.groups.items():
        out[j] = out.get(j, 0) + (-1) ** (i % 2) * g.free_rank
    return Laurent(out)
