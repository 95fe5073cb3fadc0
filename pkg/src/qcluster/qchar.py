"""Truncated q,t-characters of Kirillov-Reshetikhin type modules.

Graded vectors are maps (i, a) -> int on I x Z.  Monomials in the
variables Y_{i,a} are graded vectors of exponents.  The twisted Y-torus
uses either the Euler form E (Y^{w1} * Y^{w2} = t^{-E} Y^{w1+w2}) or the
symmetrized form N (Y^{w1} * Y^{w2} = t^{N/2} Y^{w1+w2}); t-exponents are
stored in half units like q-exponents.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .qcoeff import ONE, QScalar

Key = tuple[int, int]
Mono = tuple[tuple[Key, int], ...]


class QCharError(Exception):
    pass


class WindowTooSmall(QCharError):
    pass


class EmptyMonomial(QCharError):
    pass


def gv(data: Mapping[Key, int] | Iterable[tuple[Key, int]] | None = None) -> dict[Key, int]:
    """Canonical graded vector: drop zeros."""
    out: dict[Key, int] = {}
    items = data.items() if isinstance(data, Mapping) else (data or ())
    for k, v in items:
        k = (int(k[0]), int(k[1]))
        out[k] = out.get(k, 0) + int(v)
    return {k: v for k, v in out.items() if v}


def gadd(*vs: Mapping[Key, int]) -> dict[Key, int]:
    out: dict[Key, int] = {}
    for v in vs:
        for k, x in v.items():
            out[k] = out.get(k, 0) + x
    return {k: v for k, v in out.items() if v}


def gscale(v: Mapping[Key, int], c: int) -> dict[Key, int]:
    return {k: x * c for k, x in v.items() if x * c}


def gshift(v: Mapping[Key, int], d: int) -> dict[Key, int]:
    """eta[d] with (eta[d])_{i,a} = eta_{i,a+d}."""
    return {(i, a - d): x for (i, a), x in v.items()}


def e(i: int, a: int) -> dict[Key, int]:
    return {(i, a): 1}


def kr_vector(i: int, k: int, a: int) -> dict[Key, int]:
    """w^{(i)}_{k,a} = e_{i,a} + e_{i,a+2} + ... + e_{i,a+2(k-1)}."""
    return {(i, a + 2 * s): 1 for s in range(k)}


def as_mono(v: Mapping[Key, int]) -> Mono:
    return tuple(sorted((k, x) for k, x in v.items() if x))


class AcyclicGrading:
    """Cartan data with an acyclic orientation and its height function xi."""

    def __init__(self, cartan: Sequence[Sequence[int]], orientation: Iterable[tuple[int, int]] = (),
                 xi: Sequence[int] | None = None):
        self.cartan = tuple(tuple(int(x) for x in r) for r in cartan)
        self.r = len(self.cartan)
        r = self.r
        for i in range(r):
            if self.cartan[i][i] != 2:
                raise QCharError("Cartan diagonal must be 2")
            for j in range(r):
                if self.cartan[i][j] != self.cartan[j][i] or (i != j and self.cartan[i][j] > 0):
                    raise QCharError("Cartan matrix must be symmetric with nonpositive off-diagonal")
        self.orientation = [tuple(map(int, arrow)) for arrow in orientation]
        if xi is None:
            xi = self._linear_extension()
        self.xi = tuple(int(x) for x in xi)
        for s, t in self.orientation:
            if not self.xi[s - 1] > self.xi[t - 1]:
                raise QCharError(f"xi does not decrease along {s}->{t}")
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                if i != j and self.cartan[i - 1][j - 1] and self.xi[i - 1] == self.xi[j - 1]:
                    raise QCharError(f"adjacent vertices {i}, {j} need distinct heights")

    def _linear_extension(self) -> list[int]:
        r = self.r
        succ = {i: set() for i in range(1, r + 1)}
        indeg = {i: 0 for i in range(1, r + 1)}
        for s, t in self.orientation:
            if t not in succ[s]:
                succ[s].add(t)
                indeg[t] += 1
        order = []
        ready = sorted(i for i in indeg if indeg[i] == 0)
        while ready:
            i = ready.pop(0)
            order.append(i)
            for t in sorted(succ[i]):
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
            ready.sort()
        if len(order) != r:
            raise QCharError("orientation has a cycle")
        xi = [0] * r
        for pos, i in enumerate(order):
            xi[i - 1] = r - pos
        return xi

    def c(self, i: int, j: int) -> int:
        return self.cartan[i - 1][j - 1]

    def eps(self, i: int, j: int) -> int:
        d = self.xi[i - 1] - self.xi[j - 1]
        return (d > 0) - (d < 0)

    def xi_ij(self, i: int, j: int) -> Fraction:
        return Fraction(self.xi[i - 1] - self.xi[j - 1], self.r)

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(1, self.r + 1) if j != i and self.c(i, j)]


def applyCq(eta: Mapping[Key, int], gr: AcyclicGrading) -> dict[Key, int]:
    """(C_q eta)_{i,a} = eta_{i,a-1} + eta_{i,a+1} + sum_{j != i} C_ij eta_{j,a+eps_ij}."""
    out: dict[Key, int] = {}
    for (j, b), x in eta.items():
        for key in ((j, b + 1), (j, b - 1)):
            out[key] = out.get(key, 0) + x
        for i in gr.neighbors(j):
            key = (i, b - gr.eps(i, j))
            out[key] = out.get(key, 0) + gr.c(i, j) * x
    return {k: v for k, v in out.items() if v}


def aMonomial(i: int, b: int, gr: AcyclicGrading) -> dict[Key, int]:
    """A_{i,b} = Y_{i,b-1} Y_{i,b+1} prod_{j != i} Y_{j,b+eps_ij}^{C_ij}."""
    return applyCq(e(i, b), gr)


class CqInverse:
    """C_q^{-1} e_{j,0}, extended upward on demand and reused by translation."""

    def __init__(self, gr: AcyclicGrading):
        self.gr = gr
        self._cols: dict[int, dict[Key, int]] = {}
        self._height: dict[int, int] = {}
        order = sorted(range(1, gr.r + 1), key=lambda i: gr.xi[i - 1])
        self._order = order

    def column(self, j: int, height: int) -> dict[Key, int]:
        """Entries (i, b) of C_q^{-1} e_{j,0} for b <= height."""
        if self._height.get(j, -10**9) < height:
            self._extend(j, height)
        return self._cols[j]

    def _extend(self, j: int, height: int) -> None:
        gr = self.gr
        v = self._cols.setdefault(j, {})
        start = self._height.get(j, 0)
        for a in range(start, height):
            # fill level a + 1 from the equation (C_q v)_{i,a} = delta
            for i in self._order:
                val = (1 if (i == j and a == 0) else 0) - v.get((i, a - 1), 0)
                for k in gr.neighbors(i):
                    val -= gr.c(i, k) * v.get((k, a + gr.eps(i, k)), 0)
                if val:
                    v[(i, a + 1)] = val
        self._height[j] = height

    def apply(self, w: Mapping[Key, int], lo: int, hi: int) -> dict[Key, int]:
        """C_q^{-1} w restricted to levels [lo, hi]."""
        out: dict[Key, int] = {}
        for (j, b), x in w.items():
            col = self.column(j, hi - b)
            for (i, c), y in col.items():
                if lo <= c + b <= hi:
                    key = (i, c + b)
                    out[key] = out.get(key, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def pair(self, x: Mapping[Key, int], y: Mapping[Key, int], d: int) -> int:
        """x[d] . C_q^{-1} y."""
        total = 0
        for (j, b), yv in y.items():
            # (x[d])_{i,c} = x_{i,c+d}, so x[d] . v = sum x_{i,c} v_{i,c-d}
            top = max((c for (_, c) in x), default=0) - d - b
            if top <= 0:
                continue
            col = self.column(j, top)
            for (i, c), xv in x.items():
                val = col.get((i, c - d - b))
                if val:
                    total += xv * yv * val
        return total


_INVERSES: dict[tuple, CqInverse] = {}


def cq_inverse(gr: AcyclicGrading) -> CqInverse:
    key = (gr.cartan, gr.xi)
    inv = _INVERSES.get(key)
    if inv is None:
        inv = _INVERSES[key] = CqInverse(gr)
    return inv


def cqInverseWindow(w: Mapping[Key, int], gr: AcyclicGrading, lo: int, hi: int) -> dict[Key, int]:
    """The solution v of C_q v = w vanishing below the support of w, on levels <= hi."""
    if w and lo > min(a for (_, a) in w):
        raise WindowTooSmall("window starts above the support")
    return cq_inverse(gr).apply(w, lo, hi)


def eulerForm(w1, w2, gr: AcyclicGrading) -> int:
    inv = cq_inverse(gr)
    return -inv.pair(w1, w2, 1) + inv.pair(w2, w1, 1)


def nForm(w1, w2, gr: AcyclicGrading) -> int:
    inv = cq_inverse(gr)
    return inv.pair(w1, w2, 1) - inv.pair(w2, w1, 1) - inv.pair(w1, w2, -1) + inv.pair(w2, w1, -1)


def bilinearForms(w1, w2, gr: AcyclicGrading) -> tuple[int, int]:
    return eulerForm(w1, w2, gr), nForm(w1, w2, gr)


# monomial predicates

def r_values(mono: Mapping[Key, int], gr: AcyclicGrading) -> dict[int, Fraction]:
    """r_j(m) = max{b - xi_ji : Y_{i,b} occurs in m}."""
    if not any(mono.values()):
        raise EmptyMonomial("the monomial is 1")
    out = {}
    for j in range(1, gr.r + 1):
        out[j] = max(Fraction(b) - gr.xi_ij(j, i) for (i, b), x in mono.items() if x)
    return out


def isRightNegative(mono: Mapping[Key, int], gr: AcyclicGrading) -> bool:
    rj = r_values(mono, gr)
    for j, r in rj.items():
        ok = True
        for (i, b), x in mono.items():
            if x > 0 and Fraction(b) - gr.xi_ij(j, i) == r:
                ok = False
                break
        if ok:
            return True
    return False


def isDominant(mono: Mapping[Key, int]) -> bool:
    return all(x >= 0 for x in mono.values())


def lDominant(v: Mapping[Key, int], w: Mapping[Key, int], gr: AcyclicGrading) -> bool:
    """w - C_q v >= 0."""
    return isDominant(gadd(w, gscale(applyCq(v, gr), -1)))


def monomialPredicates(mono: Mapping[Key, int], gr: AcyclicGrading) -> dict:
    return {"r": r_values(mono, gr), "rightNegative": isRightNegative(mono, gr), "dominant": isDominant(mono)}


# the twisted Y-torus

@dataclass(frozen=True)
class YElement:
    terms: Mapping[Mono, QScalar]
    grading: AcyclicGrading = field(compare=False)
    mode: str = "E"

    @classmethod
    def make(cls, terms: Mapping, gr: AcyclicGrading, mode: str = "E") -> YElement:
        if mode not in ("E", "N"):
            raise QCharError("mode must be 'E' or 'N'")
        out: dict[Mono, QScalar] = {}
        for m, c in terms.items():
            if not isinstance(m, tuple) or (m and not isinstance(m[0][0], tuple)):
                m = as_mono(m)
            elif isinstance(m, tuple) and m and isinstance(m[0], tuple) and isinstance(m[0][0], tuple):
                m = as_mono(dict(m))
            if isinstance(c, int):
                c = QScalar(c)
            s = out.get(m, QScalar()) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return cls(out, gr, mode)

    @classmethod
    def monomial(cls, w: Mapping[Key, int], gr: AcyclicGrading, mode: str = "E", coef: QScalar | int = 1) -> YElement:
        return cls.make({as_mono(w): coef}, gr, mode)

    def _form_shift(self, w1: Mapping[Key, int], w2: Mapping[Key, int]) -> int:
        if self.mode == "E":
            return -2 * eulerForm(w1, w2, self.grading)
        return nForm(w1, w2, self.grading)

    def __add__(self, other: YElement) -> YElement:
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, QScalar()) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return YElement(t, self.grading, self.mode)

    def __neg__(self) -> YElement:
        return YElement({m: -c for m, c in self.terms.items()}, self.grading, self.mode)

    def __sub__(self, other: YElement) -> YElement:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, YElement):
            return NotImplemented
        return dict(self.terms) == dict(other.terms) and self.mode == other.mode

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def tshift(self, h: int) -> YElement:
        return YElement({m: c.shift(h) for m, c in self.terms.items()}, self.grading, self.mode)

    def __mul__(self, other: YElement) -> YElement:
        """Twisted product."""
        out: dict[Mono, QScalar] = {}
        for m1, c1 in self.terms.items():
            w1 = dict(m1)
            for m2, c2 in other.terms.items():
                w2 = dict(m2)
                m = as_mono(gadd(w1, w2))
                c = (c1 * c2).shift(self._form_shift(w1, w2))
                s = out.get(m, QScalar()) + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return YElement(out, self.grading, self.mode)

    def commutative_mul(self, other: YElement) -> YElement:
        out: dict[Mono, QScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = as_mono(gadd(dict(m1), dict(m2)))
                s = out.get(m, QScalar()) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return YElement(out, self.grading, self.mode)

    def at_one(self) -> dict[Mono, int]:
        return {m: c.at_one() for m, c in self.terms.items() if c.at_one()}

    def truncate(self, c: int | Mapping[int, int]) -> YElement:
        """Drop monomials containing a variable Y_{i,b} with b > c_i."""
        def cap(i):
            return c if isinstance(c, int) else c[i]
        return YElement({m: x for m, x in self.terms.items() if all(b <= cap(i) for (i, b), _ in m)},
                        self.grading, self.mode)

    def normalized(self, lead: Mapping[Key, int]) -> YElement:
        """Rescale so that the monomial Y^lead has coefficient 1."""
        c = self.terms.get(as_mono(lead))
        if c is None or not c.is_qpower():
            raise QCharError("lead monomial missing or its coefficient is not a t-power")
        return self.tshift(-c.max_exp())

    def monomials(self) -> list[dict[Key, int]]:
        return [dict(m) for m in self.terms]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "terms": [{"mono": [[i, a, x] for (i, a), x in m], "coef": c.to_list()}
                      for m, c in sorted(self.terms.items())],
        }


def krLeading(i: int, k: int, a: int) -> dict[Key, int]:
    return kr_vector(i, k, a)


def variantLeading(i: int, k: int, h: int, a: int, gr: AcyclicGrading) -> dict[Key, int]:
    """w^{(i)}_{k-h,h,a} = w^{(i)}_{k-h,a} - sum_{j != i} C_ij w^{(j)}_{h,a+2(k-h)+1+eps_ij}."""
    out = kr_vector(i, k - h, a)
    for j in gr.neighbors(i):
        out = gadd(out, gscale(kr_vector(j, h, a + 2 * (k - h) + 1 + gr.eps(i, j)), -gr.c(i, j)))
    return out


def _tail_character(lead: Mapping[Key, int], i: int, length: int, a: int, gr: AcyclicGrading,
                    window, mode: str) -> YElement:
    terms = {}
    for s in range(length + 1):
        mono = dict(lead)
        for t in range(s + 1, length + 1):
            mono = gadd(mono, gscale(aMonomial(i, a + 2 * t - 1, gr), -1))
        terms[as_mono(mono)] = ONE
    out = YElement.make(terms, gr, mode)
    return out.truncate(window) if window is not None else out


def closedFormLimit(i: int, k: int, a: int, gr: AcyclicGrading | None = None) -> int | None:
    """Largest window at vertex i in which the closed form is the full truncation.

    None means no limit: without neighbours the closed form is the whole
    character.
    """
    if gr is not None and not gr.neighbors(i):
        return None
    return a + 2 * k


def adaptedWindow(i: int, c: int, gr: AcyclicGrading) -> dict[int, int]:
    """Multidegree with c_i = c and c_j = c_l - 1 + eps_lj along edges l - j.

    Truncating at this multidegree keeps the closed forms exact; a uniform
    window does so only when every eps along the way is +1.
    """
    out = {i: c}
    todo = deque([i])
    while todo:
        l = todo.popleft()
        for j in gr.neighbors(l):
            if j not in out:
                out[j] = out[l] - 1 + gr.eps(l, j)
                todo.append(j)
    for j in range(1, gr.r + 1):
        out.setdefault(j, c)
    return out


def krCharacter(i: int, k: int, a: int, gr: AcyclicGrading, window=None, mode: str = "E") -> YElement:
    """Closed form of the truncated character of W^{(i)}_{k,a}."""
    if k < 0:
        raise QCharError("k must be nonnegative")
    if k == 0:
        return YElement.make({(): ONE}, gr, mode)
    return _tail_character(kr_vector(i, k, a), i, k, a, gr, window, mode)


def variantCharacter(i: int, k: int, h: int, a: int, gr: AcyclicGrading, window=None, mode: str = "E") -> YElement:
    """Closed form of the truncated character of W^{(i)}_{k-h,h,a}."""
    if not 0 <= h <= k:
        raise QCharError("need 0 <= h <= k")
    if k == h == 0:
        return YElement.make({(): ONE}, gr, mode)
    return _tail_character(variantLeading(i, k, h, a, gr), i, k - h, a, gr, window, mode)


def exceedsClosedForm(i: int, k: int, a: int, window: int, gr: AcyclicGrading | None = None) -> bool:
    limit = closedFormLimit(i, k, a, gr)
    return limit is not None and window > limit


def _nprod(x: YElement, y: YElement, lead: Mapping[Key, int]) -> YElement:
    return (x * y).normalized(lead)


@dataclass
class TSystemReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def checkTSystems(i: int, k: int, a: int, gr: AcyclicGrading, window: int | None = None,
                  mode: str = "E", h: int | None = None) -> TSystemReport:
    """Verify the T-system, the KR product identity and the variant identity.

    Characters are multiplied in the twisted torus and truncated afterwards
    at the adapted multidegree through (i, window); the default window a + 2k
    is where every closed form involved is exact.
    """
    if k < 1:
        raise QCharError("k must be positive")
    limit = closedFormLimit(i, k, a, gr)
    c = (a + 2 * k if limit is None else limit) if window is None else window
    if limit is not None and c > limit:
        raise WindowTooSmall(f"window {c} exceeds the closed-form range {limit}")
    cut = adaptedWindow(i, c, gr)
    rep = TSystemReport()

    def W(j, kk, aa):
        return krCharacter(j, kk, aa, gr, None, mode)

    tm1 = -2  # t^{-1} in half units
    # T-system
    lhs = _nprod(W(i, k, a + 2), W(i, k, a), gadd(kr_vector(i, k, a + 2), kr_vector(i, k, a)))
    rhs1 = _nprod(W(i, k - 1, a + 2), W(i, k + 1, a), gadd(kr_vector(i, k - 1, a + 2), kr_vector(i, k + 1, a)))
    prod = YElement.make({(): ONE}, gr, mode)
    lead: dict[Key, int] = {}
    for j in gr.neighbors(i):
        for _ in range(-gr.c(i, j)):
            prod = prod * W(j, k, a + 1 + gr.eps(i, j))
            lead = gadd(lead, kr_vector(j, k, a + 1 + gr.eps(i, j)))
    rhs2 = prod.normalized(lead).tshift(tm1)
    diff = (lhs - rhs1 - rhs2).truncate(cut)
    rep.checks["T-system"] = not diff.terms
    rep.details["T-system"] = str(len(diff.terms))
    # product of fundamental and KR characters
    lhs = _nprod(W(i, 1, a + 2 * k), W(i, k, a), gadd(kr_vector(i, 1, a + 2 * k), kr_vector(i, k, a)))
    rhs = W(i, k + 1, a) + variantCharacter(i, k, 1, a, gr, None, mode).tshift(tm1)
    diff = (lhs - rhs).truncate(cut)
    rep.checks["KR product"] = not diff.terms
    rep.details["KR product"] = str(len(diff.terms))
    # variant identity, for every 1 <= h <= k unless one h is requested
    hs = [h] if h is not None else list(range(1, k + 1))
    for hh in hs:
        top = a + 2 * (k - hh + 1)
        lhs = _nprod(W(i, hh, top), W(i, k, a), gadd(kr_vector(i, hh, top), kr_vector(i, k, a)))
        rhs1 = _nprod(W(i, hh - 1, top), W(i, k + 1, a), gadd(kr_vector(i, hh - 1, top), kr_vector(i, k + 1, a)))
        rhs = rhs1 + variantCharacter(i, k, hh, a, gr, None, mode).tshift(tm1)
        diff = (lhs - rhs).truncate(cut)
        rep.checks[f"variant h={hh}"] = not diff.terms
        rep.details[f"variant h={hh}"] = str(len(diff.terms))
    return rep
