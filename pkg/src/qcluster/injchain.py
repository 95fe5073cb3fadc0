"""Injective-reachable seeds, injectives and projectives, chain seeds.

A seed t is injective-reachable via (Sigma, sigma) when the seed Sigma t
carries variables of degree -e_i (exchangeable part) in the positions
sigma(i) and has the same principal exchange matrix up to sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .qtorus import TorusElement, Vec, normalize, unit, vadd
from .seeds import ClusterState, Seed, applySequence, mutateSeedSeq, mutateState
from .tropical import leadingDegrees


class NotInjectiveReachable(Exception):
    pass


def _perm(sigma: Mapping[int, int] | Sequence[int], n: int) -> dict[int, int]:
    if isinstance(sigma, Mapping):
        p = {int(k): int(v) for k, v in sigma.items()}
    else:
        p = {i + 1: int(v) for i, v in enumerate(sigma)}
    if sorted(p) != list(range(1, n + 1)) or sorted(p.values()) != list(range(1, n + 1)):
        raise ValueError("sigma is not a permutation of 1..n")
    return p


def invert(p: Mapping[int, int]) -> dict[int, int]:
    return {v: k for k, v in p.items()}


def apply_to_seq(p: Mapping[int, int], seq: Sequence[int]) -> list[int]:
    """sigma(Sigma): relabel every vertex of a mutation sequence."""
    return [p[k] for k in seq]


def inverse_seq(seq: Sequence[int]) -> list[int]:
    return list(reversed(seq))


def perm_vector(p: Mapping[int, int], g: Sequence[int]) -> Vec:
    """Action on vectors with p e_i = e_{p^{-1}(i)}, frozen part fixed."""
    out = list(g)
    for i, j in p.items():
        # p e_j = e_{p^{-1} j}, so (p g)_{p^{-1} j} = g_j, i.e. (p g)_i = g_{p(i)}
        out[i - 1] = g[j - 1]
    return tuple(out)


@dataclass
class ReachData:
    Sigma: list[int]
    sigma: dict[int, int]
    fcoeffs: dict[int, Vec] = field(default_factory=dict)

    @property
    def sigma_inv(self) -> dict[int, int]:
        return invert(self.sigma)

    def to_json(self) -> dict:
        return {
            "Sigma": list(self.Sigma),
            "sigma": [self.sigma[i] for i in sorted(self.sigma)],
            "f": {str(k): list(v) for k, v in sorted(self.fcoeffs.items())},
        }


def _at_self(st: ClusterState | Seed) -> ClusterState:
    seed = st.seed if isinstance(st, ClusterState) else st
    if isinstance(st, ClusterState) and not st.path and st.ref is st.seed:
        return st
    return ClusterState.initial(seed)


def checkInjectiveReachable(st: ClusterState | Seed, Sigma: Sequence[int], sigma,
                            expand: bool = True) -> ReachData:
    """Verify both defining conditions at the current seed of ``st``.

    With ``expand=False`` leading degrees are tracked tropically instead of
    expanding the variables of Sigma t, which keeps large words tractable.
    """
    base = _at_self(st)
    t = base.seed
    n, m = t.n, t.m
    p = _perm(sigma, n)
    if expand:
        end = applySequence(base, list(Sigma))
        end_seed = end.seed
        degs = [x.leading_degree() for x in end.vars]
    else:
        end_seed, degs = leadingDegrees(t, list(Sigma))
    f = {}
    for i in range(1, n + 1):
        g = degs[p[i] - 1]
        want = tuple(-1 if j == i else 0 for j in range(1, n + 1))
        if g[:n] != want:
            raise NotInjectiveReachable(f"deg X_{p[i]}(Sigma t) = {g} does not project to -e_{i}")
        f[i] = (0,) * n + g[n:]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if end_seed.b(p[i], p[j]) != t.b(i, j):
                raise NotInjectiveReachable(f"b_{p[i]}{p[j]}(Sigma t) != b_{i}{j}(t)")
    return ReachData(list(Sigma), p, f)


def sigmaTSeed(st: ClusterState | Seed, rd: ReachData) -> ClusterState:
    """The state at Sigma t expanded in T(t)."""
    return applySequence(_at_self(st), rd.Sigma)


def minusOneSequence(rd: ReachData) -> list[int]:
    """Written sequence leading from t to t[-1] = (sigma^{-1} Sigma)^{-1} t."""
    return inverse_seq(apply_to_seq(rd.sigma_inv, rd.Sigma))


def injectives(st: ClusterState | Seed, rd: ReachData) -> list[TorusElement]:
    end = sigmaTSeed(st, rd)
    return [end.vars[rd.sigma[k] - 1] for k in range(1, len(rd.sigma) + 1)]


def projectives(st: ClusterState | Seed, rd: ReachData) -> list[TorusElement]:
    """P_k(t) = X_{sigma^{-1} k}(t[-1]) expanded in T(t)."""
    down = applySequence(_at_self(st), minusOneSequence(rd))
    inv = rd.sigma_inv
    return [down.vars[inv[k] - 1] for k in range(1, len(rd.sigma) + 1)]


def injectivesAndProjectives(st, rd: ReachData) -> tuple[list[TorusElement], list[TorusElement]]:
    return injectives(st, rd), projectives(st, rd)


def transportReachability(st: ClusterState | Seed, rd: ReachData, kseq: Sequence[int]) -> ReachData:
    """Reach data (mu_{sigma(k)} Sigma mu_k^{-1}, sigma) at mu_k t, verified."""
    kseq = list(kseq)
    if not kseq:
        return rd
    base = _at_self(st)
    new_sigma_seq = apply_to_seq(rd.sigma, kseq) + list(rd.Sigma) + inverse_seq(kseq)
    moved = mutateSeedSeq(base.seed, kseq)
    return checkInjectiveReachable(moved, new_sigma_seq, rd.sigma)


def chainSequence(rd: ReachData, d: int) -> list[int]:
    """Written sequence from t to t[d]."""
    n = len(rd.sigma)
    ident = {i: i for i in range(1, n + 1)}

    def power(e: int) -> dict[int, int]:
        p = dict(ident)
        base = rd.sigma if e >= 0 else rd.sigma_inv
        for _ in range(abs(e)):
            p = {i: base[p[i]] for i in p}
        return p

    seq: list[int] = []
    if d >= 0:
        for j in range(d):
            # t[j+1] = sigma^j Sigma t[j]
            seq = apply_to_seq(power(j), rd.Sigma) + seq
    else:
        for j in range(0, d, -1):
            # t[j-1] = (sigma^{j-1} Sigma)^{-1} t[j]
            seq = inverse_seq(apply_to_seq(power(j - 1), rd.Sigma)) + seq
    return seq


def buildChainSeed(st: ClusterState | Seed, rd: ReachData, d: int) -> tuple[ClusterState, ReachData]:
    """State at t[d] expanded in T(t), with reach data (sigma^d Sigma, sigma)."""
    base = _at_self(st)
    out = applySequence(base, chainSequence(rd, d))
    n = len(rd.sigma)
    p = {i: i for i in range(1, n + 1)}
    step = rd.sigma if d >= 0 else rd.sigma_inv
    for _ in range(abs(d)):
        p = {i: step[p[i]] for i in p}
    return out, ReachData(apply_to_seq(p, rd.Sigma), dict(rd.sigma), {})


def injPointedElement(st: ClusterState | Seed, rd: ReachData, gtilde: Sequence[int],
                      inj: list[TorusElement] | None = None) -> TorusElement:
    """inj^t(g) = [X^{g_f} * X^{g_+} * I^{g_-}], pointed at g."""
    base = _at_self(st)
    T = base.torus
    n, m = base.seed.n, base.seed.m
    gtilde = tuple(gtilde)
    if inj is None:
        inj = injectives(base, rd)
    gf = list((0,) * n + gtilde[n:])
    gplus = [max(0, x) for x in gtilde[:n]] + [0] * (m - n)
    for k in range(1, n + 1):
        c = max(0, -gtilde[k - 1])
        if c:
            fk = rd.fcoeffs.get(k, (0,) * m)
            for j in range(m):
                gf[j] -= c * fk[j]
    out = T.x(gf) * T.x(gplus)
    for k in range(1, n + 1):
        c = max(0, -gtilde[k - 1])
        if c:
            out = out * (inj[k - 1] ** c)
    out = normalize(out)
    if out.leading_degree() != gtilde:
        raise AssertionError(f"inj element pointed at {out.leading_degree()}, expected {gtilde}")
    return out


@dataclass
class ExpansionReport:
    failures: list[str] = field(default_factory=list)
    p: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def _fpoly_at_one(x: TorusElement) -> tuple[Vec, dict[tuple[int, ...], int]]:
    g0 = x.leading_degree()
    out = {}
    for g, c in x.terms.items():
        v = x.torus.dominates(g0, g)
        if v is None:
            raise ValueError(f"{g} not below leading degree {g0}")
        val = c.at_one()
        if val:
            out[v] = val
    return g0, out


def _gt(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x >= y for x, y in zip(a, b)) and tuple(a) != tuple(b)


def verifyClusterExpansion(st: ClusterState | Seed, rd: ReachData) -> ExpansionReport:
    """Check the injective and projective expansion shapes at q^{1/2} = 1."""
    base = _at_self(st)
    t = base.seed
    n, m = t.n, t.m
    rep = ExpansionReport()
    inj = injectives(base, rd)
    for i in range(1, n + 1):
        _, F = _fpoly_at_one(inj[i - 1])
        ei = unit(n, i)
        zero = (0,) * n
        if F.get(zero) != 1 or F.get(ei) != 1:
            rep.failures.append(f"I_{i}: constant or Y_{i} coefficient is not 1")
        for v in F:
            if v not in (zero, ei) and not _gt(v, ei):
                rep.failures.append(f"I_{i}: unexpected Y-exponent {v}")
    # P_i(Sigma t) = X_{sigma^{-1} i}(t) expanded in T(Sigma t)
    sig_seed = mutateSeedSeq(t, rd.Sigma)
    sig_seed = Seed(f"{t.id}[Sigma]", sig_seed.btilde, sig_seed.lam, sig_seed.labels)
    back = applySequence(ClusterState.initial(sig_seed), inverse_seq(rd.Sigma))
    inv = rd.sigma_inv
    for i in range(1, n + 1):
        P = back.vars[inv[i] - 1]
        g0, F = _fpoly_at_one(P)
        maxi = [v for v in F if not any(_gt(w, v) for w in F)]
        if len(maxi) != 1:
            rep.failures.append(f"P_{i}: no unique top Y-exponent")
            continue
        p = maxi[0]
        rep.p[i] = p
        ei = unit(n, i)
        pe = tuple(a - b for a, b in zip(p, ei))
        if F.get(p) != 1 or F.get(pe) != 1:
            rep.failures.append(f"P_{i}: coefficient at p or p - e_{i} is not 1")
        for v in F:
            d = tuple(a - b for a, b in zip(p, v))
            if min(d) < 0:
                rep.failures.append(f"P_{i}: exponent {v} not below p")
            elif any(d) and d != ei and not _gt(d, ei):
                rep.failures.append(f"P_{i}: unexpected Y-exponent {v}")
        lhs = vadd(g0, sig_seed.torus.bv(p))
        rhs = perm_vector(inv, inj[inv[i] - 1].leading_degree())
        if lhs != rhs:
            rep.failures.append(f"P_{i}: index {lhs} != sigma^-1 coindex {rhs}")
    return rep


@dataclass
class ControlData:
    k: int
    f: Vec
    bplus: Vec
    fplus: Vec
    alpha: int  # half units
    lhs: TorusElement
    xprime: TorusElement

    @property
    def rest(self) -> TorusElement:
        return self.lhs - self.xprime


def controlExpansion(st: ClusterState | Seed, rd: ReachData, k: int) -> ControlData:
    """q^{-alpha} [P_k X^{-f}] * X^{f+ + b+} next to the new variable X'_k.

    f is the frozen part of the degree of inj_{sigma^{-1} k}(t[-1]); b+ and
    f+ are the positive exchangeable and frozen parts of column k of B(t).
    The bracket is the normalized product, i.e. the cluster monomial of
    t[-1] with degree e_{sigma^{-1} k} - f.
    """
    base = _at_self(st)
    t = base.seed
    n, m = t.n, t.m
    T = base.torus
    down, rd_down = buildChainSeed(base, rd, -1)
    at_down = checkInjectiveReachable(down.seed, rd_down.Sigma, rd.sigma)
    j = rd.sigma_inv[k]
    f = at_down.fcoeffs[j]
    col = T.bcol(k)
    bplus = tuple(max(0, col[i]) if i < n else 0 for i in range(m))
    fplus = tuple(max(0, col[i]) if i >= n else 0 for i in range(m))
    top = vadd(bplus, fplus)
    alpha = T.form(tuple(-x for x in unit(m, k)), top)
    head = normalize(down.vars[j - 1] * T.x(tuple(-x for x in f)))
    lhs = (head * T.x(top)).qshift(-alpha)
    xprime = mutateState(base, k).vars[k - 1]
    return ControlData(k, f, bplus, fplus, alpha, lhs, xprime)
