"""Compatible pairs, seed mutation and cluster variable expansions.

A ClusterState keeps every cluster variable of its current seed as a
Laurent polynomial in a fixed reference torus.  Mutation sequences are
lists in written order and act right to left, so ``[2, 1]`` mutates at 1
first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

import sympy

from .qtorus import (
    NonzeroRemainder,
    Torus,
    TorusElement,
    Vec,
    leftQuotientExact,
    normalize,
    unit,
)

Matrix = tuple[tuple[int, ...], ...]


class SeedError(Exception):
    pass


class NotCompatible(SeedError):
    pass


class NotSkew(SeedError):
    pass


class RankDeficient(SeedError):
    pass


class VertexOutOfRange(SeedError):
    pass


def _mat(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a)


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a))


def checkCompatible(lam: Sequence[Sequence[int]], btilde: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Diagonal D with Lambda (-Btilde) = (D; 0), or raise."""
    lam, btilde = _mat(lam), _mat(btilde)
    m = len(btilde)
    n = len(btilde[0]) if m else 0
    if len(lam) != m or any(len(r) != m for r in lam):
        raise NotCompatible("Lambda must be m x m")
    if any(lam[i][j] != -lam[j][i] for i in range(m) for j in range(m)):
        raise NotSkew("Lambda is not skew-symmetric")
    if n and sympy.Matrix(btilde).rank() != n:
        raise RankDeficient("Btilde is not of full rank")
    prod = matmul(lam, btilde)
    d = []
    for i in range(m):
        for j in range(n):
            v = -prod[i][j]
            if i == j:
                if v == 0:
                    raise NotCompatible(f"zero diagonal entry at {i + 1}")
                d.append(v)
            elif v != 0:
                raise NotCompatible(f"nonzero entry at ({i + 1}, {j + 1})")
    return tuple(d)


def compatibleLambda(btilde: Sequence[Sequence[int]], d: Sequence[int] | None = None) -> Matrix:
    """Some integral skew Lambda with Lambda (-Btilde) = (c D; 0), c > 0."""
    btilde = _mat(btilde)
    m, n = len(btilde), len(btilde[0])
    d = list(d) if d is not None else [1] * n
    syms = {}
    for i in range(m):
        for j in range(i + 1, m):
            syms[i, j] = sympy.Symbol(f"l_{i}_{j}")

    def entry(i, j):
        if i == j:
            return 0
        return syms[i, j] if i < j else -syms[j, i]

    L = sympy.Matrix(m, m, lambda i, j: entry(i, j))
    target = sympy.Matrix(m, n, lambda i, j: -d[j] if i == j else 0)
    eqs = list(L * sympy.Matrix(btilde) - target)
    sol = sympy.linsolve(eqs, list(syms.values()))
    if not sol:
        raise NotCompatible("no compatible Lambda exists")
    (vals,) = sol
    free = {s: 0 for s in set().union(*(sympy.sympify(v).free_symbols for v in vals))}
    vals = [sympy.Rational(sympy.sympify(v).subs(free)) for v in vals]
    scale = lcm(*(int(v.q) for v in vals)) if vals else 1
    out = [[0] * m for _ in range(m)]
    for (i, j), v in zip(syms, vals):
        out[i][j] = int(v * scale)
        out[j][i] = -out[i][j]
    return _mat(out)


@dataclass(eq=False)
class Seed:
    """A compatible pair (Lambda, Btilde) with frozen labels and provenance."""

    id: str
    btilde: Matrix
    lam: Matrix
    labels: tuple[str, ...] = ()
    provenance: tuple[str, int] | None = None
    _torus: Torus | None = field(default=None, repr=False)

    def __post_init__(self):
        self.btilde = _mat(self.btilde)
        self.lam = _mat(self.lam)
        if not self.labels:
            self.labels = tuple(f"X{i}" for i in range(1, self.m + 1))
        self.labels = tuple(self.labels)

    @property
    def m(self) -> int:
        return len(self.btilde)

    @property
    def n(self) -> int:
        return len(self.btilde[0]) if self.btilde else 0

    @property
    def torus(self) -> Torus:
        if self._torus is None:
            self._torus = Torus(self.id, self.lam, self.btilde)
        return self._torus

    def b(self, i: int, j: int) -> int:
        """Entry b_ij, 1-based."""
        return self.btilde[i - 1][j - 1]

    def principal(self) -> Matrix:
        return self.btilde[: self.n]

    def same_pair(self, other: Seed) -> bool:
        return self.btilde == other.btilde and self.lam == other.lam

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "m": self.m,
            "n": self.n,
            "B": [list(r) for r in self.btilde],
            "Lambda": [list(r) for r in self.lam],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> Seed:
        B = data["B"]
        m, n = int(data["m"]), int(data["n"])
        if len(B) != m or any(len(r) != n for r in B):
            raise SeedError("B has the wrong shape")
        lam = data.get("Lambda")
        if lam is None:
            lam = [[0] * m for _ in range(m)]
        return cls(data.get("id", "t0"), B, lam, tuple(data.get("labels", ())))

    @classmethod
    def load(cls, path: str) -> Seed:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _check_vertex(seed: Seed, k: int) -> None:
    if not 1 <= k <= seed.n:
        raise VertexOutOfRange(f"vertex {k} not in [1, {seed.n}]")


def mutation_matrices(btilde: Matrix, k: int, eps: int = 1) -> tuple[Matrix, Matrix]:
    """The matrices E_eps (m x m) and F_eps (n x n) for mutation at k."""
    m, n = len(btilde), len(btilde[0])
    kk = k - 1
    E = [[int(i == j) for j in range(m)] for i in range(m)]
    for i in range(m):
        E[i][kk] = -1 if i == kk else max(0, -eps * btilde[i][kk])
    F = [[int(i == j) for j in range(n)] for i in range(n)]
    for j in range(n):
        F[kk][j] = -1 if j == kk else max(0, eps * btilde[kk][j])
    return _mat(E), _mat(F)


def mutateSeed(seed: Seed, k: int, eps: int = 1, new_id: str | None = None) -> Seed:
    """Mutation of the compatible pair at exchangeable vertex k."""
    _check_vertex(seed, k)
    E, F = mutation_matrices(seed.btilde, k, eps)
    btilde = matmul(matmul(E, seed.btilde), F)
    lam = matmul(matmul(transpose(E), seed.lam), E)
    return Seed(new_id or f"{seed.id}*{k}", btilde, lam, seed.labels, (seed.id, k))


def mutateSeedSeq(seed: Seed, seq: Sequence[int]) -> Seed:
    for k in reversed(list(seq)):
        seed = mutateSeed(seed, k)
    return seed


@dataclass(eq=False)
class ClusterState:
    """Current seed plus expansions of its cluster variables in a reference torus."""

    ref: Seed
    seed: Seed
    vars: tuple[TorusElement, ...]
    path: tuple[int, ...] = ()

    @classmethod
    def initial(cls, seed: Seed) -> ClusterState:
        T = seed.torus
        return cls(seed, seed, tuple(T.x(unit(seed.m, i)) for i in range(1, seed.m + 1)))

    @property
    def torus(self) -> Torus:
        return self.ref.torus

    @property
    def written_path(self) -> list[int]:
        """Mutations from the reference seed in written (right-to-left) order."""
        return list(reversed(self.path))

    def var(self, i: int) -> TorusElement:
        return self.vars[i - 1]

    def to_json(self) -> dict:
        return {
            "ref": self.ref.to_json(),
            "seed": self.seed.to_json(),
            "path": self.written_path,
            "vars": [v.to_json() for v in self.vars],
        }


def monomialInVars(st: ClusterState, d: Sequence[int]) -> TorusElement:
    """X(t)^d in the reference torus, with X(t)^d = q^{-1/2 sum_{i<j} d_i d_j Lambda_ij} X_1^{d_1}*...*X_m^{d_m}."""
    lam = st.seed.lam
    m = st.seed.m
    shift = 0
    for i in range(m):
        if d[i]:
            for j in range(i + 1, m):
                if d[j]:
                    shift -= d[i] * d[j] * lam[i][j]
    out = st.torus.one()
    for i in range(m):
        if d[i]:
            if d[i] < 0 and i < st.seed.n:
                raise SeedError("negative power of an exchangeable variable")
            out = out * (st.vars[i] ** d[i])
    return out.qshift(shift)


def mutateState(st: ClusterState, k: int) -> ClusterState:
    """Mutate the current seed at k and expand the new variable in the reference torus."""
    seed = st.seed
    _check_vertex(seed, k)
    m = seed.m
    col = [seed.btilde[i][k - 1] for i in range(m)]
    bplus = tuple(max(0, b) for b in col)
    bminus = tuple(max(0, -b) for b in col)
    lam_k = seed.lam[k - 1]
    # X_k * X^{-e_k + b} = q^{Lambda(e_k, b)/2} X^b in the current torus
    num = monomialInVars(st, bplus).qshift(sum(a * b for a, b in zip(lam_k, bplus)))
    num = num + monomialInVars(st, bminus).qshift(sum(a * b for a, b in zip(lam_k, bminus)))
    new = leftQuotientExact(st.vars[k - 1], num)
    if not new.is_pointed():
        norm = normalize(new)
        raise NonzeroRemainder(f"exchange quotient not normalized: {norm}")
    newvars = list(st.vars)
    newvars[k - 1] = new
    return ClusterState(st.ref, mutateSeed(seed, k), tuple(newvars), st.path + (k,))


def applySequence(st: ClusterState, seq: Sequence[int]) -> ClusterState:
    """Apply a written mutation sequence, rightmost vertex first."""
    for k in reversed(list(seq)):
        st = mutateState(st, k)
    return st


def extendedGVector(st: ClusterState, i: int) -> Vec:
    return st.vars[i - 1].leading_degree()


def clusterMonomial(st: ClusterState, d: Sequence[int]) -> TorusElement:
    """The normalized quantum cluster monomial [prod X_i(t)^{d_i}]."""
    if len(d) != st.seed.m:
        raise SeedError("exponent vector has wrong length")
    return monomialInVars(st, d)


def quasiCommutationHolds(st: ClusterState) -> bool:
    """X_i * X_j = q^{Lambda(t)_ij} X_j * X_i for all current variables."""
    lam = st.seed.lam
    for i in range(st.seed.m):
        for j in range(i + 1, st.seed.m):
            a = st.vars[i] * st.vars[j]
            b = (st.vars[j] * st.vars[i]).qshift(2 * lam[i][j])
            if a != b:
                return False
    return True


def exchangePattern(seed: Seed, max_clusters: int = 1000) -> list[ClusterState]:
    """Breadth-first search of distinct clusters reachable from ``seed``.

    Clusters are compared as sets of exchangeable variables; stops with an
    error when more than ``max_clusters`` are found.
    """
    start = ClusterState.initial(seed)
    n = seed.n

    def key(st: ClusterState):
        return frozenset(st.vars[:n])

    seen = {key(start): start}
    queue = [start]
    while queue:
        st = queue.pop(0)
        for k in range(1, n + 1):
            nxt = mutateState(st, k)
            kk = key(nxt)
            if kk not in seen:
                seen[kk] = nxt
                queue.append(nxt)
                if len(seen) > max_clusters:
                    raise SeedError("exchange pattern exceeds the cluster limit")
    return list(seen.values())
