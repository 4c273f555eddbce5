"""Closed smoothed-braid diagrams.

A diagram is the closure of a word in the letters ``sigma_i^{+1}``,
``sigma_i^{-1}`` and ``e_i`` (a crossing that has already been smoothed
into a cup over a cap).  Strand positions are numbered ``1..n`` and a
letter with index ``i`` acts on positions ``i`` and ``i+1``.

Geometry used throughout the package: a word of length ``L`` on ``n``
strands is cut into ``n * max(L, 1)`` arcs.  Arc ``(p, l)`` is the piece
of strand position ``p`` (0-based) lying just above letter ``l``; the
closure identifies the segment below the last letter with segment 0.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

CROSSING = "crossing"
SMOOTHED = "smoothed"


class WordError(ValueError):
    """Raised for malformed or out-of-range braid words."""


@dataclass(frozen=True)
class Letter:
    kind: str
    index: int
    sign: int = 0

    def __post_init__(self):
        if self.kind == CROSSING:
            if self.sign not in (1, -1):
                raise WordError(f"crossing letter needs sign +1 or -1, got {self.sign}")
        elif self.kind == SMOOTHED:
            if self.sign != 0:
                raise WordError("smoothed letters carry no sign")
        else:
            raise WordError(f"unknown letter kind {self.kind!r}")
        if self.index < 1:
            raise WordError(f"letter index must be >= 1, got {self.index}")

    @property
    def is_crossing(self) -> bool:
        return self.kind == CROSSING

    def token(self) -> str:
        if self.kind == SMOOTHED:
            return f"e{self.index}"
        return str(self.index * self.sign)

    @classmethod
    def sigma(cls, index: int, sign: int = 1) -> "Letter":
        return cls(CROSSING, index, sign)

    @classmethod
    def e(cls, index: int) -> "Letter":
        return cls(SMOOTHED, index)


@dataclass(frozen=True)
class SmoothedBraidWord:
    strand_count: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.strand_count < 1:
            raise WordError("strand count must be >= 1")
        for letter in self.letters:
            if not 1 <= letter.index <= self.strand_count - 1:
                raise WordError(
                    f"letter {letter.token()} out of range for {self.strand_count} strands")

    def __len__(self):
        return len(self.letters)

    @property
    def crossing_positions(self) -> tuple:
        """Positions (0-based) of crossing letters; this is the crossing order."""
        return tuple(p for p, lt in enumerate(self.letters) if lt.is_crossing)

    @property
    def crossing_count(self) -> int:
        return sum(1 for lt in self.letters if lt.is_crossing)

    def render(self) -> str:
        body = " ".join(lt.token() for lt in self.letters)
        return f"{self.strand_count}: {body}".rstrip() if body else f"{self.strand_count}:"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class TorusFamilySpec:
    m: int
    n: int
    k: int = 0


@dataclass(frozen=True)
class DiagramStats:
    writhe: int
    crossing_count: int
    component_count: int


_TOKEN = re.compile(r"^(?:(e)(\d+)|([+-]?)(\d+))$")


def parse_word(text: str, strands: Optional[int] = None) -> SmoothedBraidWord:
    """Parse a braid word such as ``"1 -2 1 -2"`` or ``"4: 3 2 1 e1"``.

    A ``n:`` prefix gives the strand count; an explicit ``strands`` argument
    must agree with it.  Without either, the strand count is one more than
    the largest letter index.
    """
    text = text.strip()
    if ":" in text:
        head, _, text = text.partition(":")
        try:
            declared = int(head)
        except ValueError:
            raise WordError(f"bad strand count {head!r}") from None
        if strands is not None and strands != declared:
            raise WordError(f"strand count {declared} disagrees with {strands}")
        strands = declared

    letters = []
    for tok in re.split(r"[\s,]+", text):
        if not tok:
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise WordError(f"malformed token {tok!r}")
        if m.group(1):
            idx = int(m.group(2))
            if idx == 0:
                raise WordError("letter index 0")
            letters.append(Letter.e(idx))
        else:
            idx = int(m.group(4))
            if idx == 0:
                raise WordError("letter index 0")
            letters.append(Letter.sigma(idx, -1 if m.group(3) == "-" else 1))

    needed = 1 + max((lt.index for lt in letters), default=0)
    if strands is None:
        strands = needed
    elif strands < needed:
        raise WordError(f"{strands} strands is too few for letter index {needed - 1}")
    return SmoothedBraidWord(strands, tuple(letters))


def word_from_indices(indices: Iterable[int], strands: Optional[int] = None) -> SmoothedBraidWord:
    """Build a crossing-only word from signed generator indices."""
    return parse_word(" ".join(str(i) for i in indices), strands)


def torus_word(spec: TorusFamilySpec) -> SmoothedBraidWord:
    """Closed braid ``(sigma_{m-1} ... sigma_1)^n sigma_1^k`` for ``T^(k)(m, n)``."""
    m, n, k = spec.m, spec.n, spec.k
    if m < 2:
        raise WordError("torus family needs m >= 2")
    if n < 0:
        raise WordError("torus family needs n >= 0")
    block = [Letter.sigma(i) for i in range(m - 1, 0, -1)]
    twist = [Letter.sigma(1, 1 if k > 0 else -1)] * abs(k)
    return SmoothedBraidWord(m, tuple(block * n + twist))


def torus(m: int, n: int, k: int = 0) -> SmoothedBraidWord:
    return torus_word(TorusFamilySpec(m, n, k))


def flat_two_cabling_word(s: int) -> SmoothedBraidWord:
    """Flat 2-cabling of ``T(2, 2s+1)``, i.e. ``T^(-4s-2)(4, 4s+2)``."""
    if s < 1:
        raise WordError("cabling parameter must be >= 1")
    return torus(4, 4 * s + 2, -4 * s - 2)


def smooth_at(word: SmoothedBraidWord, position: int, marker: str) -> SmoothedBraidWord:
    """Smooth the crossing at 1-based letter ``position`` with marker ``"A"`` or ``"B"``.

    For a positive crossing the A-smoothing is the identity tangle (the letter
    is deleted) and the B-smoothing is ``e_i``; a negative crossing is the
    mirror image.
    """
    if not 1 <= position <= len(word.letters):
        raise WordError(f"position {position} out of range 1..{len(word.letters)}")
    letter = word.letters[position - 1]
    if not letter.is_crossing:
        raise WordError(f"letter at position {position} is already smoothed")
    marker = marker.upper()
    if marker not in ("A", "B"):
        raise WordError(f"marker must be A or B, got {marker!r}")
    vertical = (marker == "A") == (letter.sign > 0)
    rest = list(word.letters)
    if vertical:
        del rest[position - 1]
    else:
        rest[position - 1] = Letter.e(letter.index)
    return SmoothedBraidWord(word.strand_count, tuple(rest))


def _trace(word: SmoothedBraidWord):
    """Walk the closure curve.

    Returns ``(components, direction)`` where ``direction[(p, l)]`` is +1 if
    the arc is traversed downward and -1 if upward.  Each component starts at
    its smallest unvisited arc, ``(segment, position)`` order, heading down.
    """
    n = word.strand_count
    L = len(word.letters)
    if L == 0:
        return n, {(p, 0): 1 for p in range(n)}

    def partner(p, letter):
        if letter.index - 1 == p:
            return p + 1
        if letter.index == p:
            return p - 1
        return None

    direction = {}
    components = 0
    for seg in range(L):
        for p in range(n):
            if (p, seg) in direction:
                continue
            components += 1
            pos, lev, d = p, seg, 1
            while (pos, lev) not in direction:
                direction[(pos, lev)] = d
                if d == 1:
                    letter = word.letters[lev]
                    q = partner(pos, letter)
                    if q is None:
                        pos, lev = pos, (lev + 1) % L
                    elif letter.is_crossing:
                        pos, lev = q, (lev + 1) % L
                    else:
                        pos, d = q, -1
                else:
                    letter = word.letters[(lev - 1) % L]
                    q = partner(pos, letter)
                    if q is None:
                        pos, lev = pos, (lev - 1) % L
                    elif letter.is_crossing:
                        pos, lev = q, (lev - 1) % L
                    else:
                        pos, d = q, 1
    return components, direction


def component_count(word: SmoothedBraidWord) -> int:
    return _trace(word)[0]


def oriented_writhe(word: SmoothedBraidWord) -> int:
    """Writhe with respect to an orientation traced along the curve.

    On a pure braid word every arc points down and this is the exponent sum.
    Once a word contains ``e_i`` letters some strands run upward and the
    crossings they meet change sign.  For knots the value does not depend on
    the traversal choices.
    """
    _, direction = _trace(word)
    total = 0
    for lev, letter in enumerate(word.letters):
        if letter.is_crossing:
            p = letter.index - 1
            total += letter.sign * direction[(p, lev)] * direction[(p + 1, lev)]
    return total


def stats(word: SmoothedBraidWord) -> DiagramStats:
    """Exponent-sum writhe, crossing count and number of closed curves."""
    writhe = sum(lt.sign for lt in word.letters if lt.is_crossing)
    return DiagramStats(writhe, word.crossing_count, component_count(word))


def torus_components(m: int, n: int) -> int:
    """Components of ``T(m, n)`` by the gcd rule (``m`` when ``n == 0``)."""
    return math.gcd(m, n) if n else m


def as_word(obj) -> SmoothedBraidWord:
    if isinstance(obj, SmoothedBraidWord):
        return obj
    if isinstance(obj, str):
        return parse_word(obj)
    if isinstance(obj, TorusFamilySpec):
        return torus_word(obj)
    if isinstance(obj, Sequence):
        return word_from_indices(obj)
    raise TypeError(f"cannot interpret {obj!r} as a braid word")
