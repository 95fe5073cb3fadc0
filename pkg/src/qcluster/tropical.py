"""Tropical transformations of degree lattices along mutation paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .qtorus import NotComparable, Vec
from .seeds import ClusterState, Seed, _check_vertex, mutateSeed


class WrongSeed(Exception):
    pass


def tropicalStep(seed: Seed, k: int, g: Sequence[int]) -> Vec:
    """phi_{mu_k t, t}: degrees in D(t) to degrees in D(mu_k t)."""
    _check_vertex(seed, k)
    if len(g) != seed.m:
        raise WrongSeed("degree vector has wrong length")
    gk = g[k - 1]
    out = list(g)
    out[k - 1] = -gk
    for i in range(seed.m):
        if i == k - 1:
            continue
        b = seed.btilde[i][k - 1]
        if b > 0:
            out[i] += b * max(gk, 0)
        elif b < 0:
            out[i] += b * max(-gk, 0)
    return tuple(out)


@dataclass
class TropicalPath:
    """Start seed plus a written (right-to-left) vertex sequence."""

    start: Seed
    vertices: list[int] = field(default_factory=list)

    def seeds(self) -> list[Seed]:
        out = [self.start]
        for k in reversed(self.vertices):
            out.append(mutateSeed(out[-1], k))
        return out


def tropicalPath(path: TropicalPath, g: Sequence[int], seed: Seed | None = None) -> Vec:
    """Compose tropical steps along the path, starting in D(path.start)."""
    if seed is not None and seed.id != path.start.id:
        raise WrongSeed(f"degree lives in {seed.id}, path starts at {path.start.id}")
    s = path.start
    g = tuple(g)
    for k in reversed(path.vertices):
        g = tropicalStep(s, k, g)
        s = mutateSeed(s, k)
    return g


@dataclass
class TransportReport:
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def checkDegreeTransport(state_from: ClusterState, state_to: ClusterState, path: Sequence[int]) -> TransportReport:
    """Compare deg^{t2} X_i with phi_{t2,t1}(deg^{t1} X_i).

    Both states hold the same cluster variables (same current seed) but are
    expanded in different reference seeds t1 and t2; ``path`` leads from t1
    to t2 in written order.
    """
    rep = TransportReport()
    if not state_from.seed.same_pair(state_to.seed):
        rep.failures.append("states are not at the same seed")
        return rep
    tp = TropicalPath(state_from.ref, list(path))
    end = tp.seeds()[-1]
    if not end.same_pair(state_to.ref):
        rep.failures.append("path does not lead to the target reference seed")
        return rep
    for i in range(1, state_from.seed.m + 1):
        g1 = state_from.vars[i - 1].leading_degree()
        g2 = state_to.vars[i - 1].leading_degree()
        rep.checked += 1
        moved = tropicalPath(tp, g1)
        if moved != g2:
            rep.failures.append(f"X_{i}: transported {moved} but expansion has {g2}")
    return rep


def checkLambdaTransport(state_from: ClusterState, state_to: ClusterState) -> TransportReport:
    """Check Lambda(t')(deg^{t'} X_i(t), deg^{t'} X_j(t)) = Lambda(t)_ij.

    ``state_to`` expands the variables of seed t in the reference torus of t'.
    """
    rep = TransportReport()
    lam = state_from.seed.lam
    T = state_to.torus
    degs = [v.leading_degree() for v in state_to.vars]
    m = state_to.seed.m
    for i in range(m):
        for j in range(m):
            rep.checked += 1
            val = T.form(degs[i], degs[j])
            if val != lam[i][j]:
                rep.failures.append(f"({i + 1},{j + 1}): {val} != {lam[i][j]}")
    return rep


def signCoherentAt(g1: Sequence[int], g2: Sequence[int], k: int) -> bool:
    return g1[k - 1] * g2[k - 1] >= 0


def leadingDegrees(seed: Seed, seq: Sequence[int]) -> tuple[Seed, list[Vec]]:
    """Leading degrees in D(seed) of the cluster variables after a written sequence.

    No expansions are formed.  The new variable X'_k has one of the two
    exchange degrees sum_i [+-b_ik]_+ g_i - g_k; they differ by Btilde(t0) c_k
    and the sign of the c-vector c_k decides which one dominates.
    """
    T = seed.torus
    m = seed.m
    degs = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    cur = seed
    for k in reversed(list(seq)):
        _check_vertex(cur, k)
        col = [cur.btilde[i][k - 1] for i in range(m)]
        plus = [0] * m
        minus = [0] * m
        for i, b in enumerate(col):
            if b > 0:
                plus = [x + b * y for x, y in zip(plus, degs[i])]
            elif b < 0:
                minus = [x - b * y for x, y in zip(minus, degs[i])]
        gk = degs[k - 1]
        dplus = tuple(x - y for x, y in zip(plus, gk))
        dminus = tuple(x - y for x, y in zip(minus, gk))
        if T.dominates(dminus, dplus) is not None:
            new = dminus
        elif T.dominates(dplus, dminus) is not None:
            new = dplus
        else:
            raise NotComparable(f"exchange degrees {dplus}, {dminus} are not comparable")
        degs[k - 1] = new
        cur = mutateSeed(cur, k)
    return cur, degs
