"""Quantum tori: twisted Laurent polynomials, dominance order and division."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import sympy

from .qcoeff import ONE, QScalar, barScalar

Vec = tuple[int, ...]


class TorusError(Exception):
    pass


class SeedMismatch(TorusError):
    pass


class NoUniqueLeadingTerm(TorusError):
    pass


class NonMonomialLeadingCoefficient(TorusError):
    pass


class NotComparable(TorusError):
    pass


class NonzeroRemainder(TorusError):
    pass


def vadd(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def unit(m: int, i: int) -> Vec:
    """Standard basis vector e_i, 1-based."""
    return tuple(1 if j == i - 1 else 0 for j in range(m))


def grlex_key(g: Sequence[int]) -> tuple:
    return (sum(g), tuple(g))


@dataclass(eq=False)
class Torus:
    """Ambient data of a quantum torus: quantization matrix and exchange matrix."""

    id: str
    lam: tuple[tuple[int, ...], ...]
    btilde: tuple[tuple[int, ...], ...]
    _dom: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        self.lam = tuple(tuple(int(x) for x in row) for row in self.lam)
        self.btilde = tuple(tuple(int(x) for x in row) for row in self.btilde)
        if len(self.lam) != len(self.btilde):
            raise ValueError("Lambda and Btilde have different row counts")

    @property
    def m(self) -> int:
        return len(self.btilde)

    @property
    def n(self) -> int:
        return len(self.btilde[0]) if self.btilde else 0

    def form(self, g: Sequence[int], h: Sequence[int]) -> int:
        """Lambda(g, h) = g^T Lambda h."""
        total = 0
        for i, gi in enumerate(g):
            if gi:
                row = self.lam[i]
                total += gi * sum(r * x for r, x in zip(row, h) if x)
        return total

    def bcol(self, k: int) -> Vec:
        """Column k (1-based) of Btilde, the degree of Y_k."""
        return tuple(row[k - 1] for row in self.btilde)

    def bv(self, v: Sequence[int]) -> Vec:
        return tuple(sum(b * x for b, x in zip(row, v)) for row in self.btilde)

    def _dominance_data(self):
        if self._dom is None:
            B = sympy.Matrix(self.btilde)
            _, pivots = B.T.rref()
            if len(pivots) != self.n:
                raise TorusError("Btilde is not of full rank")
            rows = list(pivots)
            sub = B.extract(rows, list(range(self.n)))
            det = int(sub.det())
            adj = [[int(x) for x in r] for r in sub.adjugate().tolist()]
            if det < 0:
                det, adj = -det, [[-x for x in r] for r in adj]
            self._dom = (rows, det, adj)
        return self._dom

    def coords(self, g: Sequence[int]) -> tuple[Vec, Vec]:
        """Split g into (class key, scaled coordinates u).

        g2 = g1 + Btilde v with integral v iff the keys agree and
        u(g2) - u(g1) = det * v.
        """
        rows, det, adj = self._dominance_data()
        sel = [g[r] for r in rows]
        u = tuple(sum(a * x for a, x in zip(arow, sel)) for arow in adj)
        bu = self.bv(u)
        key = tuple(det * x - y for x, y in zip(g, bu))
        return key, u

    def dominates(self, g_high: Sequence[int], g_low: Sequence[int]) -> Vec | None:
        """v in N^n with g_low = g_high + Btilde v, or None."""
        diff = vsub(g_low, g_high)
        rows, det, adj = self._dominance_data()
        sel = [diff[r] for r in rows]
        v = []
        for arow in adj:
            s = sum(a * x for a, x in zip(arow, sel))
            if s < 0 or s % det:
                return None
            v.append(s // det)
        v = tuple(v)
        if self.bv(v) != diff:
            return None
        return v

    def x(self, g: Sequence[int], coef: QScalar | int = 1) -> TorusElement:
        return TorusElement.monomial(self, g, coef)

    def one(self) -> TorusElement:
        return TorusElement.monomial(self, (0,) * self.m)

    def zero(self) -> TorusElement:
        return TorusElement(self, {})

    def e(self, i: int) -> Vec:
        return unit(self.m, i)


class TorusElement:
    """Finite sum of X^g with QScalar coefficients in a fixed torus."""

    __slots__ = ("torus", "terms")

    def __init__(self, torus: Torus, terms: Mapping[Sequence[int], QScalar | int]):
        self.torus = torus
        t: dict[Vec, QScalar] = {}
        for g, c in terms.items():
            if isinstance(c, int):
                c = QScalar(c)
            if c:
                g = tuple(g)
                if len(g) != torus.m:
                    raise ValueError("exponent vector has wrong length")
                if g in t:
                    c = t[g] + c
                    if not c:
                        del t[g]
                        continue
                t[g] = c
        self.terms = t

    @classmethod
    def _raw(cls, torus: Torus, terms: dict[Vec, QScalar]) -> TorusElement:
        obj = cls.__new__(cls)
        obj.torus = torus
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, torus: Torus, g: Sequence[int], coef: QScalar | int = 1) -> TorusElement:
        return cls(torus, {tuple(g): coef})

    def _check(self, other: TorusElement) -> None:
        if self.torus.id != other.torus.id:
            raise SeedMismatch(f"{self.torus.id} vs {other.torus.id}")

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def coef(self, g: Sequence[int]) -> QScalar:
        return self.terms.get(tuple(g), QScalar())

    def support(self) -> list[Vec]:
        return sorted(self.terms, key=grlex_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.torus.id == other.torus.id and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.torus.id, frozenset(self.terms.items())))

    def __add__(self, other: TorusElement) -> TorusElement:
        self._check(other)
        t = dict(self.terms)
        for g, c in other.terms.items():
            if g in t:
                s = t[g] + c
                if s:
                    t[g] = s
                else:
                    del t[g]
            else:
                t[g] = c
        return TorusElement._raw(self.torus, t)

    def __neg__(self) -> TorusElement:
        return TorusElement._raw(self.torus, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: TorusElement) -> TorusElement:
        return self + (-other)

    def scale(self, c: QScalar | int) -> TorusElement:
        if isinstance(c, int):
            c = QScalar(c)
        if not c:
            return self.torus.zero()
        return TorusElement._raw(self.torus, {g: v * c for g, v in self.terms.items()})

    def qshift(self, h: int) -> TorusElement:
        """Multiply by q^{h/2}."""
        if not h:
            return self
        return TorusElement._raw(self.torus, {g: c.shift(h) for g, c in self.terms.items()})

    def __mul__(self, other: TorusElement | QScalar | int) -> TorusElement:
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return twistedProduct(self, other)

    def __rmul__(self, other: QScalar | int) -> TorusElement:
        return self.scale(other)

    def __pow__(self, n: int) -> TorusElement:
        if n < 0:
            if len(self.terms) != 1:
                raise TorusError("only monomials can be inverted")
            (g, c), = self.terms.items()
            if not c.is_qpower():
                raise TorusError("only unit monomials can be inverted")
            # (X^g)^{-1} = X^{-g} since Lambda(g, -g) = 0
            inv = TorusElement._raw(self.torus, {tuple(-x for x in g): c ** -1})
            return inv ** (-n)
        out = self.torus.one()
        for _ in range(n):
            out = out * self
        return out

    def bar(self) -> TorusElement:
        return barElement(self)

    def at_one(self) -> dict[Vec, int]:
        """Specialize q^{1/2} = 1, dropping zero coefficients."""
        out = {}
        for g, c in self.terms.items():
            v = c.at_one()
            if v:
                out[g] = v
        return out

    def maximal_degrees(self) -> list[Vec]:
        return maximal_degrees(self.torus, self.terms)

    def leading_degree(self) -> Vec:
        maxi = self.maximal_degrees()
        if len(maxi) != 1:
            raise NoUniqueLeadingTerm(f"{len(maxi)} maximal degrees")
        return maxi[0]

    def is_pointed(self) -> bool:
        try:
            g = self.leading_degree()
        except NoUniqueLeadingTerm:
            return False
        return self.terms[g] == ONE

    def is_bar_invariant(self) -> bool:
        return all(barScalar(c) == c for c in self.terms.values())

    def f_polynomial(self) -> dict[Vec, QScalar]:
        """Map v -> coefficient of X^{deg + Btilde v} for a pointed-type element."""
        g0 = self.leading_degree()
        out = {}
        for g, c in self.terms.items():
            v = self.torus.dominates(g0, g)
            if v is None:
                raise NotComparable(f"{g} is not below {g0}")
            out[v] = c
        return out

    def to_json(self) -> dict:
        return {
            "seed": self.torus.id,
            "terms": [{"deg": list(g), "coef": self.terms[g].to_list()} for g in self.support()],
        }

    @classmethod
    def from_json(cls, torus: Torus, data: Mapping) -> TorusElement:
        if data.get("seed", torus.id) != torus.id:
            raise SeedMismatch(f"{data.get('seed')} vs {torus.id}")
        terms = {tuple(t["deg"]): QScalar.from_list(t["coef"]) for t in data["terms"]}
        return cls(torus, terms)

    def __repr__(self) -> str:
        return f"TorusElement({self.torus.id}, {format_element(self)})"


def format_element(x: TorusElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for g in reversed(x.support()):
        c = x.terms[g]
        parts.append(f"({c})X^{list(g)}")
    return " + ".join(parts)


def twistedProduct(x: TorusElement, y: TorusElement) -> TorusElement:
    """Bilinear extension of X^g * X^h = q^{Lambda(g,h)/2} X^{g+h}."""
    x._check(y)
    torus = x.torus
    lam = torus.lam
    m = torus.m
    # Lambda h for each degree h of y
    ylam = []
    for h, c in y.terms.items():
        lh = [sum(lam[i][j] * h[j] for j in range(m) if h[j]) for i in range(m)]
        ylam.append((h, lh, c.items()))
    acc: dict[Vec, dict[int, int]] = {}
    for g, cg in x.terms.items():
        gitems = cg.items()
        nz = [(i, gi) for i, gi in enumerate(g) if gi]
        for h, lh, hitems in ylam:
            s = sum(gi * lh[i] for i, gi in nz)
            key = tuple(a + b for a, b in zip(g, h))
            slot = acc.get(key)
            if slot is None:
                slot = acc[key] = {}
            for h1, a in gitems:
                for h2, b in hitems:
                    e = h1 + h2 + s
                    slot[e] = slot.get(e, 0) + a * b
    out = {}
    for key, slot in acc.items():
        t = {e: c for e, c in slot.items() if c}
        if t:
            out[key] = QScalar._raw(t)
    return TorusElement._raw(torus, out)


def barElement(x: TorusElement) -> TorusElement:
    """Bar involution: coefficients barred, exponents fixed."""
    return TorusElement._raw(x.torus, {g: barScalar(c) for g, c in x.terms.items()})


def maximal_degrees(torus: Torus, degrees: Iterable[Sequence[int]]) -> list[Vec]:
    """Degrees not strictly dominated by another degree in the collection."""
    groups: dict[Vec, list[tuple[Vec, Vec]]] = {}
    for g in degrees:
        key, u = torus.coords(g)
        groups.setdefault(key, []).append((tuple(g), u))
    _, det, _ = torus._dominance_data()
    out = []
    for members in groups.values():
        # a dominating degree has strictly smaller coordinate sum, so it is
        # enough to test each degree against the maxima found before it
        members.sort(key=lambda p: sum(p[1]))
        found: list[tuple[Vec, Vec]] = []
        for g, u in members:
            # g2 strictly above g: u(g) - u(g2) = det v with v >= 0
            if not any(all(a >= b and (a - b) % det == 0 for a, b in zip(u, u2)) for _, u2 in found):
                found.append((g, u))
        out.extend(g for g, _ in found)
    return sorted(out, key=grlex_key)


def normalize(x: TorusElement) -> TorusElement:
    """Rescale so the unique dominance-maximal term has coefficient 1."""
    g = x.leading_degree()
    c = x.terms[g]
    mono = c.as_monomial()
    if mono is None or mono[1] != 1:
        raise NonMonomialLeadingCoefficient(str(c))
    return x.qshift(-mono[0])


def dominates(g_high: Sequence[int], g_low: Sequence[int], torus: Torus) -> Vec | None:
    """v >= 0 with g_low = g_high + Btilde v, or None."""
    return torus.dominates(g_high, g_low)


def intervalBetween(g_low: Sequence[int], g_high: Sequence[int], torus: Torus) -> list[Vec]:
    """All degrees g with g_low <= g <= g_high in the dominance order."""
    top = torus.dominates(g_high, g_low)
    if top is None:
        raise NotComparable(f"{tuple(g_low)} is not below {tuple(g_high)}")
    out = []
    for v in itertools.product(*(range(t + 1) for t in top)):
        out.append(vadd(g_high, torus.bv(v)))
    return out


def _grlex_top(terms: Mapping[Vec, QScalar]) -> Vec:
    return max(terms, key=grlex_key)


def leftQuotientExact(d: TorusElement, numerator: TorusElement) -> TorusElement:
    """The Laurent polynomial w with d * w = numerator, by graded-lex long division."""
    d._check(numerator)
    if d.is_zero():
        raise ZeroDivisionError("division by zero element")
    torus = d.torus
    if numerator.is_zero():
        return torus.zero()
    m = torus.m
    lam = torus.lam
    top_d = _grlex_top(d.terms)
    lc = d.terms[top_d]
    low_d = min(d.terms, key=grlex_key)
    low_n = min(numerator.terms, key=grlex_key)
    low_w = grlex_key(vsub(low_n, low_d))
    lo = [min(g[i] for g in numerator.terms) - min(g[i] for g in d.terms) for i in range(m)]
    hi = [max(g[i] for g in numerator.terms) - max(g[i] for g in d.terms) for i in range(m)]
    dterms = [(h, list(c.items())) for h, c in d.terms.items()]
    # mutable remainder: degree -> {half exponent: coefficient}; max-heap on grlex
    rem: dict[Vec, dict[int, int]] = {g: dict(c.items()) for g, c in numerator.terms.items()}
    heap = [(-sum(g), tuple(-x for x in g)) for g in rem]
    heapq.heapify(heap)
    quot: dict[Vec, QScalar] = {}
    while heap:
        _, neg = heapq.heappop(heap)
        t = tuple(-x for x in neg)
        slot = rem.pop(t, None)
        if not slot:
            continue
        slot = {e: c for e, c in slot.items() if c}
        if not slot:
            continue
        g = vsub(t, top_d)
        if grlex_key(g) < low_w or any(not (lo[i] <= g[i] <= hi[i]) for i in range(m)):
            raise NonzeroRemainder(f"remainder term at degree {t}")
        c = QScalar._raw(slot).exact_div(lc.shift(torus.form(top_d, g)))
        if c is None:
            raise NonzeroRemainder(f"inexact coefficient at degree {t}")
        quot[g] = c
        citems = list(c.items())
        lam_g = [sum(lam[i][j] * g[j] for j in range(m) if g[j]) for i in range(m)]
        for h, hitems in dterms:
            key = tuple(a + b for a, b in zip(h, g))
            if key == t:
                continue
            s = sum(hi_ * lam_g[i] for i, hi_ in enumerate(h) if hi_)
            target = rem.get(key)
            if target is None:
                target = rem[key] = {}
                heapq.heappush(heap, (-sum(key), tuple(-x for x in key)))
            for e1, a in hitems:
                for e2, b in citems:
                    e = e1 + e2 + s
                    target[e] = target.get(e, 0) - a * b
    return TorusElement._raw(torus, quot)
