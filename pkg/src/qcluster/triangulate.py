"""Unitriangular expansions against pointed sets, triangular-basis axioms
on finite windows, and the variation map between similar seeds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .qcoeff import ONE, QScalar, barScalar, isInNegIdeal
from .qtorus import (
    NoUniqueLeadingTerm,
    Torus,
    TorusElement,
    Vec,
    maximal_degrees,
    normalize,
    vadd,
    vsub,
)


class TriangulateError(Exception):
    pass


class MissingBasisElement(TriangulateError):
    pass


class NotPointed(TriangulateError):
    pass


class NonFrozenSupport(TriangulateError):
    pass


class PointedSet:
    """Pointed elements keyed by leading degree, optionally filled on demand."""

    def __init__(self, torus: Torus, elements: Mapping[Sequence[int], TorusElement] | None = None,
                 window: Iterable[Sequence[int]] | None = None,
                 factory: Callable[[Vec], TorusElement | None] | None = None):
        self.torus = torus
        self.elements: dict[Vec, TorusElement] = {tuple(g): x for g, x in (elements or {}).items()}
        self.window = set(tuple(g) for g in window) if window is not None else set(self.elements)
        self.factory = factory

    def __contains__(self, g) -> bool:
        return tuple(g) in self.elements or (self.factory is not None and self.get(g) is not None)

    def get(self, g: Sequence[int]) -> TorusElement | None:
        g = tuple(g)
        x = self.elements.get(g)
        if x is None and self.factory is not None:
            x = self.factory(g)
            if x is not None:
                self.elements[g] = x
        return x

    def window_elements(self) -> dict[Vec, TorusElement]:
        out = {}
        for g in sorted(self.window):
            x = self.get(g)
            if x is None:
                raise MissingBasisElement(f"no element at {g}")
            out[g] = x
        return out

    def to_json(self) -> dict:
        return {
            "seed": self.torus.id,
            "elements": [{"deg": list(g), "elem": self.elements[g].to_json()} for g in sorted(self.window)
                         if g in self.elements],
        }

    @classmethod
    def from_json(cls, torus: Torus, data: Mapping) -> PointedSet:
        els = {tuple(e["deg"]): TorusElement.from_json(torus, e["elem"]) for e in data["elements"]}
        return cls(torus, els)


@dataclass
class Expansion:
    coeffs: dict[Vec, QScalar]
    residual: dict[Vec, QScalar] = field(default_factory=dict)
    tainted: set[Vec] = field(default_factory=set)

    @property
    def complete(self) -> bool:
        return not self.residual

    def to_json(self) -> dict:
        return {
            "coeffs": [{"deg": list(g), "coef": c.to_list()} for g, c in sorted(self.coeffs.items())],
            "residual": [{"deg": list(g), "coef": c.to_list()} for g, c in sorted(self.residual.items())],
            "tainted": [list(g) for g in sorted(self.tainted)],
        }


def unitriangularExpand(Z: TorusElement, basis: PointedSet, window: Iterable[Sequence[int]] | None = None,
                        max_steps: int = 100000) -> Expansion:
    """Coefficients b with Z = L(deg Z) + sum b_g L(g), g below deg Z.

    Degrees outside the window (when one is given) or missing from the basis
    are moved to the residual; window degrees below a residual degree are
    reported as tainted since the omitted basis elements could reach them.
    """
    torus = Z.torus
    try:
        top = Z.leading_degree()
    except NoUniqueLeadingTerm as exc:
        raise NotPointed(str(exc)) from exc
    if Z.terms[top] != ONE:
        raise NotPointed("leading coefficient is not 1")
    win = set(tuple(g) for g in window) if window is not None else None
    if basis.get(top) is None or (win is not None and top not in win):
        raise MissingBasisElement(f"no basis element at the leading degree {top}")
    rem = Z
    coeffs: dict[Vec, QScalar] = {}
    residual: dict[Vec, QScalar] = {}
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > max_steps:
            raise TriangulateError("expansion did not terminate")
        for g in maximal_degrees(torus, rem.terms):
            c = rem.terms[g]
            L = None if (win is not None and g not in win) else basis.get(g)
            if L is None:
                residual[g] = residual.get(g, QScalar()) + c
                rem = rem - TorusElement._raw(torus, {g: c})
            else:
                if L.terms.get(g) != ONE:
                    raise NotPointed(f"basis element at {g} is not pointed there")
                coeffs[g] = coeffs.get(g, QScalar()) + c
                rem = rem - L.scale(c)
    tainted = set()
    if residual:
        for g in coeffs:
            if any(torus.dominates(r, g) is not None for r in residual):
                tainted.add(g)
    return Expansion({g: c for g, c in coeffs.items() if c}, residual, tainted)


def checkMUnitriangular(Z: TorusElement, basis: PointedSet, window=None) -> bool:
    """Unitriangular expansion exists in the window with lower coefficients in m."""
    try:
        ex = unitriangularExpand(Z, basis, window)
    except (MissingBasisElement, NotPointed):
        return False
    if not ex.complete:
        return False
    top = Z.leading_degree()
    return all(isInNegIdeal(c) for g, c in ex.coeffs.items() if g != top)


@dataclass
class AxiomReport:
    results: dict[str, list[str]] = field(default_factory=dict)

    def add(self, axiom: str, failure: str | None = None) -> None:
        self.results.setdefault(axiom, [])
        if failure:
            self.results[axiom].append(failure)

    @property
    def ok(self) -> bool:
        return all(not v for v in self.results.values())

    def summary(self) -> dict[str, bool]:
        return {k: not v for k, v in self.results.items()}


def verifyTriangularAxioms(candidate: PointedSet, cluster_vars: Sequence[TorusElement],
                           monomials: Mapping[Vec, TorusElement], n: int) -> AxiomReport:
    """Finite-window checks of the triangular basis axioms.

    ``cluster_vars`` are the variables X_i(t), ``monomials`` the cluster
    monomials of t and t[1] that fall into the window, keyed by degree.
    """
    rep = AxiomReport()
    torus = candidate.torus
    els = {}
    for g in sorted(candidate.window):
        x = candidate.get(g)
        if x is None:
            rep.add("bijective", f"missing element at {g}")
        else:
            els[g] = x
    rep.add("bijective")
    for g, x in els.items():
        if not x.is_bar_invariant():
            rep.add("bar", f"element at {g} is not bar-invariant")
        if not x.is_pointed() or x.leading_degree() != g:
            rep.add("bijective", f"element keyed {g} is not pointed there")
    rep.add("bar")
    rep.add("contains")
    for g, mono in monomials.items():
        if g in candidate.window and els.get(g) != mono:
            rep.add("contains", f"cluster monomial at {g} differs")
    rep.add("triangular")
    for i, xi in enumerate(cluster_vars, start=1):
        for g, s in els.items():
            prod = normalize(xi * s)
            if not checkMUnitriangular(prod, candidate):
                rep.add("triangular", f"[X_{i} * L{g}] is not (<,m)-unitriangular")
    rep.add("frozen")
    for j in range(n + 1, torus.m + 1):
        ej = torus.e(j)
        for g, s in els.items():
            prod = normalize(torus.x(ej) * s)
            d = prod.leading_degree()
            other = candidate.get(d)
            if other is not None and other != prod:
                rep.add("frozen", f"[X_{j} * L{g}] is not the element at {d}")
    return rep


@dataclass
class SimilarityMap:
    """var^* on exchangeable vertices (target -> source), D-scaling delta,
    and the embedding of source indices into target indices."""

    varStar: dict[int, int]
    delta: Fraction = Fraction(1)
    frozenEmbedding: dict[int, int] = field(default_factory=dict)

    def embedding(self) -> dict[int, int]:
        """Source index -> target index on all source coordinates."""
        emb = {src: tgt for tgt, src in self.varStar.items()}
        emb.update(self.frozenEmbedding)
        return emb

    def var_degree(self, eta: Sequence[int], m2: int) -> Vec:
        out = [0] * m2
        for src, tgt in self.embedding().items():
            out[tgt - 1] = eta[src - 1]
        return tuple(out)

    def var_y(self, v: Sequence[int], n2: int) -> Vec:
        out = [0] * n2
        for tgt, src in self.varStar.items():
            out[tgt - 1] = v[src - 1]
        return tuple(out)

    @classmethod
    def identity(cls, m1: int, n: int, m2: int | None = None) -> SimilarityMap:
        return cls({i: i for i in range(1, n + 1)}, Fraction(1), {i: i for i in range(n + 1, m1 + 1)})


def checkSimilar(t1: Torus, t2: Torus, sim: SimilarityMap, d1: Sequence[int], d2: Sequence[int]) -> None:
    """Principal parts related by var and D2 = delta var D1."""
    for i2, i1 in sim.varStar.items():
        for j2, j1 in sim.varStar.items():
            if t2.btilde[i2 - 1][j2 - 1] != t1.btilde[i1 - 1][j1 - 1]:
                raise TriangulateError("principal parts are not related by var")
        if Fraction(d2[i2 - 1]) != sim.delta * d1[i1 - 1]:
            raise TriangulateError("D matrices are not related by delta")


def applyVariation(x: TorusElement, sim: SimilarityMap, target: Torus) -> TorusElement:
    """Var(x): same Y-coefficients with q^{1/2} -> q^{delta/2}, degree var(eta)."""
    eta = x.leading_degree()
    if x.terms[eta] != ONE:
        raise NotPointed("variation needs a pointed element")
    base = sim.var_degree(eta, target.m)
    terms = {}
    for v, c in x.f_polynomial().items():
        g = vadd(base, target.bv(sim.var_y(v, target.n)))
        terms[g] = c.scale_exponents(sim.delta)
    return TorusElement(target, terms)


def _frozen_monomial(torus: Torus, g: Vec) -> TorusElement:
    if any(g[: torus.n]):
        raise NonFrozenSupport(f"correction degree {g} has exchangeable support")
    return torus.x(g)


def correctionFactors(target: Torus, degM: Sequence[int], degMi: Sequence[Sequence[int]],
                      degZ: Sequence[int] | None = None, degZj: Sequence[Sequence[int]] = (),
                      uj: Sequence[Sequence[int]] = (), sim: SimilarityMap | None = None
                      ) -> tuple[TorusElement, list[TorusElement]]:
    """Frozen monomials f_M and f_j relating similar algebraic equations."""
    total = tuple(degM)
    for d in degMi:
        total = vsub(total, d)
    fM = _frozen_monomial(target, total)
    fj = []
    for dz, u in zip(degZj, uj):
        vu = sim.var_y(u, target.n) if sim is not None else tuple(u)
        g = vsub(vadd(degZ, target.bv(vu)), dz)
        fj.append(_frozen_monomial(target, g))
    return fM, fj


def clusterMonomialFactory(states: Sequence) -> Callable[[Vec], TorusElement | None]:
    """Map a degree to the cluster monomial of that degree among ``states``.

    Each state contributes the monomials with nonnegative exponents on its
    exchangeable variables and arbitrary exponents on frozen ones.
    """
    import sympy

    from .seeds import clusterMonomial

    data = []
    for st in states:
        G = sympy.Matrix([list(v.leading_degree()) for v in st.vars]).T
        data.append((st, G.inv()))

    def factory(g: Vec) -> TorusElement | None:
        for st, Ginv in data:
            a = Ginv * sympy.Matrix(list(g))
            if all(x.is_integer for x in a) and all(a[i] >= 0 for i in range(st.seed.n)):
                return clusterMonomial(st, [int(x) for x in a])
        return None

    return factory
