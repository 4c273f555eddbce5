"""Viro's enhanced-state chain complex of a closed smoothed-braid word.

Conventions
-----------
* Crossings are ordered by their position in the word.
* A Kauffman state is an int whose bits are big-endian in crossing order:
  crossing ``c`` of ``C`` sits at bit ``C - 1 - c`` and a set bit means
  label ``B``.  Numeric order of states is the lexicographic order of their
  label strings with ``A < B``.
* Circles of a state are numbered by their smallest arc id
  (``arc(p, seg) = seg * n + p``).  A sign vector is an int, big-endian in
  circle number, with a set bit meaning sign ``+1``.
* ``a = #A - #B`` and ``b = a + 2 * (sum of signs)``; the differential goes
  from ``C_{a,b}`` to ``C_{a-2,b}``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagram import SmoothedBraidWord, smooth_at, stats
from .linalg import SparseIntMatrix
from .poly import Laurent

DEFAULT_MAX_GENERATORS = 50_000_000


class ResourceLimitExceeded(RuntimeError):
    """The complex would exceed the configured generator cap."""

    def __init__(self, needed: int, cap: int):
        super().__init__(f"complex has {needed} generators, cap is {cap}")
        self.needed = needed
        self.cap = cap


@dataclass(frozen=True)
class CircleDecomposition:
    count: int
    membership: Tuple[int, ...]


@dataclass(frozen=True)
class EnhancedState:
    labels: str
    signs: Tuple[int, ...]

    @property
    def sigma(self) -> int:
        return self.labels.count("A") - self.labels.count("B")

    @property
    def tau(self) -> int:
        return sum(self.signs)

    @property
    def a(self) -> int:
        return self.sigma

    @property
    def b(self) -> int:
        return self.sigma + 2 * self.tau


def _state_bits(word: SmoothedBraidWord, state) -> int:
    C = word.crossing_count
    if isinstance(state, int):
        if not 0 <= state < (1 << C):
            raise ValueError(f"state {state} out of range for {C} crossings")
        return state
    labels = "".join(state).upper()
    if len(labels) != C:
        raise ValueError(f"state has {len(labels)} labels, word has {C} crossings")
    if set(labels) - {"A", "B"}:
        raise ValueError(f"labels must be A or B, got {labels!r}")
    return int(labels.replace("A", "0").replace("B", "1"), 2) if C else 0


def state_labels(bits: int, crossings: int) -> str:
    return "".join("B" if bits >> (crossings - 1 - c) & 1 else "A" for c in range(crossings))


class Cube:
    """Per-word geometry shared by every slice of the complex."""

    def __init__(self, word: SmoothedBraidWord, crossing_order: Optional[Sequence[int]] = None):
        """``crossing_order`` lists crossing numbers in the order the sign rule uses.

        It defaults to left-to-right; state bits always follow letter order.
        """
        self.word = word
        n = word.strand_count
        L = len(word.letters)
        self.n = n
        self.segments = max(L, 1)
        self.narcs = n * self.segments
        self.crossing_letters = word.crossing_positions
        self.C = len(self.crossing_letters)
        signs = [word.letters[pos].sign for pos in self.crossing_letters]

        # Contract every join that does not depend on the state into blocks.
        parent = list(range(self.narcs))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def arc(p, seg):
            return (seg % self.segments) * n + p

        crossing_at = {pos: c for c, pos in enumerate(self.crossing_letters)}
        self._cross_arcs = [None] * self.C
        for lev, letter in enumerate(word.letters):
            q = letter.index - 1
            for p in range(n):
                if p not in (q, q + 1):
                    parent[find(arc(p, lev))] = find(arc(p, lev + 1))
            four = (arc(q, lev), arc(q + 1, lev), arc(q, lev + 1), arc(q + 1, lev + 1))
            if letter.is_crossing:
                self._cross_arcs[crossing_at[lev]] = four
            else:
                parent[find(four[0])] = find(four[1])
                parent[find(four[2])] = find(four[3])

        roots = sorted({find(x) for x in range(self.narcs)})
        block_of = {r: i for i, r in enumerate(roots)}
        self.arc_block = [block_of[find(x)] for x in range(self.narcs)]
        self.block_mask = [0] * len(roots)
        for x in range(self.narcs):
            self.block_mask[self.arc_block[x]] |= 1 << x
        # For each crossing: (vertical joins, horizontal joins) as block pairs.
        self._joins = []
        for c, (tl, tr, bl, br) in enumerate(self._cross_arcs):
            blk = self.arc_block
            vertical = ((blk[tl], blk[bl]), (blk[tr], blk[br]))
            horizontal = ((blk[tl], blk[tr]), (blk[bl], blk[br]))
            # label A is vertical for positive crossings, horizontal for negative
            a_join, b_join = (vertical, horizontal) if signs[c] > 0 else (horizontal, vertical)
            self._joins.append((a_join, b_join))
        self._circles: Dict[int, Tuple[int, ...]] = {}
        self._transitions: Dict[Tuple[int, int], tuple] = {}
        if crossing_order is None:
            self._after = [(1 << (self.C - 1 - c)) - 1 for c in range(self.C)]
        else:
            if sorted(crossing_order) != list(range(self.C)):
                raise ValueError("crossing order must be a permutation of the crossings")
            rank = {c: r for r, c in enumerate(crossing_order)}
            self._after = [sum(1 << (self.C - 1 - c2) for c2 in range(self.C)
                               if rank[c2] > rank[c]) for c in range(self.C)]

    # -- circles ---------------------------------------------------------

    def circles(self, s: int) -> Tuple[int, ...]:
        """Arc bitmasks of the circles of state ``s`` in canonical order."""
        got = self._circles.get(s)
        if got is not None:
            return got
        nb = len(self.block_mask)
        parent = list(range(nb))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        C = self.C
        for c in range(C):
            pair = self._joins[c][s >> (C - 1 - c) & 1]
            for u, v in pair:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        masks: Dict[int, int] = {}
        for blk in range(nb):
            r = find(blk)
            masks[r] = masks.get(r, 0) | self.block_mask[blk]
        got = tuple(sorted(masks.values(), key=lambda m: m & -m))
        self._circles[s] = got
        return got

    def sigma(self, s: int) -> int:
        return self.C - 2 * s.bit_count()

    def resolve(self, s: int) -> CircleDecomposition:
        circ = self.circles(s)
        membership = [0] * self.narcs
        for k, mask in enumerate(circ):
            for x in range(self.narcs):
                if mask >> x & 1:
                    membership[x] = k
        return CircleDecomposition(len(circ), tuple(membership))

    # -- adjacency -------------------------------------------------------

    def transition(self, s: int, c: int):
        """Sign-vector transfer for changing crossing ``c`` of ``s`` from A to B.

        Returns ``(t, nt, common, changed_src, patterns)``: target state, its
        circle count, ``(src_shift, tgt_shift)`` for circles common to both
        states, shifts of the source circles that disappear, and for each
        possible number of ``+`` signs on those circles the list of target
        bit patterns on the new circles that keep ``b`` fixed.
        """
        C = self.C
        t = s | (1 << (C - 1 - c))
        src = self.circles(s)
        tgt = self.circles(t)
        ns, nt = len(src), len(tgt)
        tgt_index = {m: k for k, m in enumerate(tgt)}
        common = []
        changed_src = []
        for k, m in enumerate(src):
            kt = tgt_index.pop(m, None)
            if kt is None:
                changed_src.append(ns - 1 - k)
            else:
                common.append((ns - 1 - k, nt - 1 - kt))
        changed_tgt = [nt - 1 - kt for kt in sorted(tgt_index.values())]
        shifted = []
        for per_plus in _bit_patterns(len(changed_src), len(changed_tgt)):
            pats = []
            for bits in per_plus:
                pat = 0
                for x, sh in zip(bits, changed_tgt):
                    pat |= x << sh
                pats.append(pat)
            shifted.append(sorted(pats))
        return t, nt, tuple(common), tuple(changed_src), shifted

    def edge_sign(self, s: int, c: int) -> int:
        """``(-1)^t`` with ``t`` the number of B-labels after crossing ``c``."""
        return -1 if (s & self._after[c]).bit_count() & 1 else 1


@functools.lru_cache(maxsize=None)
def _bit_patterns(n_src: int, n_tgt: int):
    """Sign bits on the new circles, indexed by the number of ``+`` on the old ones.

    Adjacency keeps ``b`` fixed while ``a`` drops by 2, so the signs on the
    new circles must sum to one more than the signs they replace.
    """
    out = []
    for plus_src in range(n_src + 1):
        want = 2 * plus_src - n_src + 1
        out.append(tuple(bits for bits in itertools.product((0, 1), repeat=n_tgt)
                         if sum(2 * x - 1 for x in bits) == want))
    return tuple(out)


def _sign_vectors(ncirc: int, plus: int) -> List[int]:
    out = []
    for combo in itertools.combinations(range(ncirc), plus):
        e = 0
        for k in combo:
            e |= 1 << k
        out.append(e)
    out.sort()
    return out


def generator_count(word: SmoothedBraidWord) -> int:
    """Total number of enhanced states, ``sum over states of 2^|sD|``.

    Evaluated with a Temperley-Lieb transfer matrix over planar matchings of
    the ``2n`` boundary points, so it costs nothing like ``2^C``.
    """
    n = word.strand_count
    # matching: tuple partner[0..2n-1]; tops 0..n-1, bottoms n..2n-1
    identity = tuple(list(range(n, 2 * n)) + list(range(n)))
    layer: Dict[Tuple[int, ...], int] = {identity: 1}

    def stack_e(match, q):
        m = list(match)
        x, y = n + q, n + q + 1
        loops = 0
        if m[x] == y:
            loops = 1
        else:
            px, py = m[x], m[y]
            m[px], m[py] = py, px
        m[x], m[y] = y, x
        return tuple(m), loops

    for letter in word.letters:
        q = letter.index - 1
        nxt: Dict[Tuple[int, ...], int] = {}
        for match, weight in layer.items():
            options = [stack_e(match, q)]
            if letter.is_crossing:
                options.append((match, 0))
            for m2, loops in options:
                nxt[m2] = nxt.get(m2, 0) + weight * (2 ** loops)
        layer = nxt

    total = 0
    for match, weight in layer.items():
        seen = set()
        loops = 0
        for start in range(n):
            if start in seen:
                continue
            loops += 1
            x = start
            while x not in seen:
                seen.add(x)
                y = match[x]
                seen.add(y)
                # bottom point y (or top) closes up to the matching top/bottom point
                x = y - n if y >= n else y + n
        total += weight * 2 ** loops
    return total


def check_guard(word: SmoothedBraidWord, max_generators: Optional[int]) -> int:
    count = generator_count(word)
    if max_generators is not None and count > max_generators:
        raise ResourceLimitExceeded(count, max_generators)
    return count


@dataclass
class BigradedComplex:
    """Generators and differentials of the enhanced-state complex.

    ``generators[(a, b)]`` lists ``(state, signs)`` pairs in canonical order;
    ``differentials[(a, b)]`` is the matrix of ``C_{a,b} -> C_{a-2,b}``
    (rows index ``C_{a-2,b}``).  Missing keys are zero.
    """

    word: SmoothedBraidWord
    generators: Dict[Tuple[int, int], List[Tuple[int, int]]]
    differentials: Dict[Tuple[int, int], SparseIntMatrix] = field(default_factory=dict)

    def rank(self, a: int, b: int) -> int:
        return len(self.generators.get((a, b), ()))

    def differential(self, a: int, b: int) -> SparseIntMatrix:
        d = self.differentials.get((a, b))
        if d is None:
            d = SparseIntMatrix.zeros(self.rank(a - 2, b), self.rank(a, b))
        return d

    def enhanced(self, a: int, b: int, idx: int, cube: Optional[Cube] = None) -> EnhancedState:
        s, e = self.generators[(a, b)][idx]
        cube = cube or Cube(self.word)
        nc = len(cube.circles(s))
        signs = tuple(1 if e >> (nc - 1 - k) & 1 else -1 for k in range(nc))
        return EnhancedState(state_labels(s, cube.C), signs)

    @property
    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted(k for k, v in self.generators.items() if v)

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.generators.values())


def resolve(word: SmoothedBraidWord, state) -> CircleDecomposition:
    """Circles of the fully smoothed closure for a Kauffman state.

    ``state`` is an ``"ABA..."`` label string (or sequence) in crossing order,
    or the equivalent big-endian int.
    """
    cube = Cube(word)
    return cube.resolve(_state_bits(word, state))


def _slice_generators(cube: Cube, b: int, basepoint: Optional[Tuple[int, int]] = None):
    """Generators with quantum grading ``b``, bucketed by ``a``.

    ``basepoint=(arc, sign)`` keeps only generators whose circle through
    ``arc`` carries ``sign``.
    """
    C = cube.C
    levels: Dict[int, List[Tuple[int, int]]] = {}
    for s in range(1 << C):
        sig = cube.sigma(s)
        if (b - sig) % 2:
            continue
        tau = (b - sig) // 2
        circ = cube.circles(s)
        nc = len(circ)
        if abs(tau) > nc or (tau + nc) % 2:
            continue
        vecs = _sign_vectors(nc, (tau + nc) // 2)
        if basepoint is not None:
            arc, want = basepoint
            k = next(i for i, m in enumerate(circ) if m >> arc & 1)
            bit = nc - 1 - k
            want_bit = 1 if want > 0 else 0
            vecs = [e for e in vecs if (e >> bit & 1) == want_bit]
        if vecs:
            bucket = levels.setdefault(sig, [])
            bucket.extend((s, e) for e in vecs)
    return levels


def _quantum_gradings(cube: Cube) -> List[int]:
    bs = set()
    for s in range(1 << cube.C):
        sig = cube.sigma(s)
        nc = len(cube.circles(s))
        bs.update(sig + 2 * tau for tau in range(-nc, nc + 1, 2))
    return sorted(bs)


def _slice_edges(cube: Cube, levels, index):
    """Yield ``(a, src_idx, tgt_idx, coef)`` for every nonzero differential entry."""
    C = cube.C
    trans_cache = cube._transitions
    for a, gens in levels.items():
        tgt_index = index.get(a - 2)
        if tgt_index is None:
            continue
        for col, (s, e) in enumerate(gens):
            for c in range(C):
                if s >> (C - 1 - c) & 1:
                    continue
                key = (s, c)
                tr = trans_cache.get(key)
                if tr is None:
                    t, _, common, changed_src, patterns = cube.transition(s, c)
                    tr = trans_cache[key] = (t, common, changed_src, patterns,
                                             cube.edge_sign(s, c))
                t, common, changed_src, patterns, sign = tr
                base = 0
                for ss, ts in common:
                    base |= (e >> ss & 1) << ts
                plus = 0
                for ss in changed_src:
                    plus += e >> ss & 1
                for pat in patterns[plus]:
                    row = tgt_index.get((t, base | pat))
                    if row is not None:
                        yield a, col, row, sign


def build_slice(cube: Cube, b: int, basepoint=None) -> BigradedComplex:
    levels = _slice_generators(cube, b, basepoint)
    index = {a: {g: i for i, g in enumerate(gens)} for a, gens in levels.items()}
    cols: Dict[int, List[Dict[int, int]]] = {a: [{} for _ in gens] for a, gens in levels.items()}
    for a, col, row, v in _slice_edges(cube, levels, index):
        cols[a][col][row] = v
    gens = {(a, b): g for a, g in levels.items()}
    diffs = {}
    for a, cl in cols.items():
        if (a - 2) in levels:
            diffs[(a, b)] = SparseIntMatrix(len(levels[a - 2]), len(levels[a]), cl)
    return BigradedComplex(cube.word, gens, diffs)


def enumerate_generators(word: SmoothedBraidWord,
                         max_generators: Optional[int] = DEFAULT_MAX_GENERATORS):
    """All enhanced states bucketed by ``(a, b)`` in canonical order."""
    check_guard(word, max_generators)
    cube = Cube(word)
    out: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for b in _quantum_gradings(cube):
        for a, gens in _slice_generators(cube, b).items():
            out[(a, b)] = gens
    return out


def build_differential(word: SmoothedBraidWord,
                       max_generators: Optional[int] = DEFAULT_MAX_GENERATORS,
                       b_values: Optional[Iterable[int]] = None,
                       basepoint=None) -> BigradedComplex:
    """The whole complex (or the slices with quantum grading in ``b_values``)."""
    check_guard(word, max_generators)
    cube = Cube(word)
    wanted = _quantum_gradings(cube) if b_values is None else sorted(set(b_values))
    gens: Dict = {}
    diffs: Dict = {}
    for b in wanted:
        piece = build_slice(cube, b, basepoint)
        gens.update(piece.generators)
        diffs.update(piece.differentials)
    return BigradedComplex(word, gens, diffs)


# -- Kauffman bracket ---------------------------------------------------------

A = Laurent.monomial(1)
A_INV = Laurent.monomial(-1)
DELTA = Laurent({2: -1, -2: -1})


def kauffman_bracket(word: SmoothedBraidWord) -> Laurent:
    """Unreduced bracket by skein recursion on the first unsmoothed crossing.

    Every circle of a fully smoothed word contributes the loop value
    ``-A^2 - A^-2`` (so the unknot evaluates to that value, not to 1).
    """
    for pos, letter in enumerate(word.letters, start=1):
        if letter.is_crossing:
            return (A * kauffman_bracket(smooth_at(word, pos, "A"))
                    + A_INV * kauffman_bracket(smooth_at(word, pos, "B")))
    return DELTA ** stats(word).component_count
