"""Coefficients in Z[q^{1/2}, q^{-1/2}].

Exponents are stored as integers counting powers of q^{1/2}, so the
element q^{h/2} has half-exponent h.  The same ring serves as the
t-coefficient ring for q,t-characters.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class QScalar:
    """Immutable sparse Laurent polynomial in q^{1/2} with integer coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int | None = None):
        if terms is None:
            t: dict[int, int] = {}
        elif isinstance(terms, int):
            t = {0: terms} if terms else {}
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            t = {}
            for h, c in items:
                h, c = int(h), int(c)
                t[h] = t.get(h, 0) + c
            t = {h: c for h, c in t.items() if c}
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict[int, int]) -> QScalar:
        # t must already be free of zeros
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def qpow(cls, h: int, c: int = 1) -> QScalar:
        """c * q^{h/2}."""
        return cls._raw({h: c}) if c else cls._raw({})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QScalar(other)
        if not isinstance(other, QScalar):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __add__(self, other: QScalar | int) -> QScalar:
        if isinstance(other, int):
            other = QScalar(other)
        t = dict(self._t)
        for h, c in other._t.items():
            v = t.get(h, 0) + c
            if v:
                t[h] = v
            else:
                t.pop(h, None)
        return QScalar._raw(t)

    __radd__ = __add__

    def __neg__(self) -> QScalar:
        return QScalar._raw({h: -c for h, c in self._t.items()})

    def __sub__(self, other: QScalar | int) -> QScalar:
        if isinstance(other, int):
            other = QScalar(other)
        return self + (-other)

    def __rsub__(self, other: int) -> QScalar:
        return QScalar(other) - self

    def __mul__(self, other: QScalar | int) -> QScalar:
        if isinstance(other, int):
            if not other:
                return QScalar._raw({})
            return QScalar._raw({h: c * other for h, c in self._t.items()})
        t: dict[int, int] = {}
        for h1, c1 in self._t.items():
            for h2, c2 in other._t.items():
                h = h1 + h2
                t[h] = t.get(h, 0) + c1 * c2
        return QScalar._raw({h: c for h, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QScalar:
        if n < 0:
            mono = self.as_monomial()
            if mono is None or abs(mono[1]) != 1:
                raise ValueError("only unit monomials can be inverted")
            h, c = mono
            return QScalar.qpow(-h * -n, c ** (-n))
        out = QScalar(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, h: int) -> QScalar:
        """Multiply by q^{h/2}."""
        if not h:
            return self
        return QScalar._raw({k + h: c for k, c in self._t.items()})

    def as_monomial(self) -> tuple[int, int] | None:
        """(h, c) if self is c*q^{h/2}, else None."""
        if len(self._t) != 1:
            return None
        return next(iter(self._t.items()))

    def is_qpower(self) -> bool:
        m = self.as_monomial()
        return m is not None and m[1] == 1

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def at_one(self) -> int:
        """Specialize q^{1/2} = 1."""
        return sum(self._t.values())

    def scale_exponents(self, delta: Fraction | int) -> QScalar:
        """Substitute q^{1/2} -> q^{delta/2}; resulting exponents must be integral."""
        t: dict[int, int] = {}
        for h, c in self._t.items():
            v = Fraction(h) * delta
            if v.denominator != 1:
                raise ValueError(f"exponent {h} scaled by {delta} is not integral")
            t[int(v)] = t.get(int(v), 0) + c
        return QScalar._raw({h: c for h, c in t.items() if c})

    def exact_div(self, other: QScalar) -> QScalar | None:
        """Quotient in Z[q^{±1/2}] if it exists, else None."""
        if not other._t:
            raise ZeroDivisionError("division by zero QScalar")
        if not self._t:
            return QScalar._raw({})
        mono = other.as_monomial()
        if mono is not None:
            h0, c0 = mono
            t = {}
            for h, c in self._t.items():
                q, r = divmod(c, c0)
                if r:
                    return None
                t[h - h0] = q
            return QScalar._raw(t)
        # dense long division from the top, polynomials in x = q^{1/2}
        a_lo, b_lo = self.min_exp(), other.min_exp()
        a = [0] * (self.max_exp() - a_lo + 1)
        for h, c in self._t.items():
            a[h - a_lo] = c
        b = [0] * (other.max_exp() - b_lo + 1)
        for h, c in other._t.items():
            b[h - b_lo] = c
        if len(a) < len(b):
            return None
        lead = b[-1]
        quot = [0] * (len(a) - len(b) + 1)
        for i in range(len(quot) - 1, -1, -1):
            c = a[i + len(b) - 1]
            if c:
                qc, r = divmod(c, lead)
                if r:
                    return None
                quot[i] = qc
                for j, bj in enumerate(b):
                    a[i + j] -= qc * bj
        if any(a):
            return None
        return QScalar._raw({i + a_lo - b_lo: c for i, c in enumerate(quot) if c})

    def to_list(self) -> list[list[int]]:
        return [[h, self._t[h]] for h in sorted(self._t)]

    @classmethod
    def from_list(cls, data: Iterable[Iterable[int]]) -> QScalar:
        return cls(tuple(p) for p in data)

    def __repr__(self) -> str:
        return f"QScalar({self.to_list()})"

    def __str__(self) -> str:
        return format_scalar(self)


def format_scalar(s: QScalar, var: str = "q") -> str:
    if not s._t:
        return "0"
    parts = []
    for h in sorted(s._t, reverse=True):
        c = s._t[h]
        if h == 0:
            mono = ""
        else:
            e = Fraction(h, 2)
            mono = f"{var}^{e}" if e != 1 else var
        if mono:
            coef = "" if c == 1 else "-" if c == -1 else str(c)
            parts.append(coef + mono)
        else:
            parts.append(str(c))
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


ZERO = QScalar()
ONE = QScalar(1)


def barScalar(s: QScalar) -> QScalar:
    """The bar involution q^{1/2} -> q^{-1/2}."""
    return QScalar._raw({-h: c for h, c in s._t.items()})


def isInNegIdeal(s: QScalar) -> bool:
    """True iff s lies in q^{-1/2} Z[q^{-1/2}]."""
    return all(h <= -1 for h in s._t)
