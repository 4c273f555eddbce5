"""Integer Laurent polynomials in one variable."""

from __future__ import annotations

from typing import Dict, Mapping


class Laurent:
    """Sparse Laurent polynomial with integer coefficients.

    Stored as ``{exponent: coefficient}`` with no zero coefficients, so two
    polynomials are equal exactly when their dictionaries are.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] = None):
        self.coeffs: Dict[int, int] = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "Laurent":
        return cls({exponent: coefficient})

    @classmethod
    def const(cls, c: int) -> "Laurent":
        return cls({0: c})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: Dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = Laurent.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                body = str(abs(c))
            else:
                coef = "" if abs(c) == 1 else f"{abs(c)}*"
                body = f"{coef}x^{e}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _coerce(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    if isinstance(x, int):
        return Laurent.const(x)
    raise TypeError(f"cannot combine Laurent with {type(x).__name__}")
