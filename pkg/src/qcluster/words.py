"""Words in the Cartan alphabet and the seeds they define.

A word is stored as written, (i_l, ..., i_1), but every index below uses
positions 1..l counted from the right, so position k carries the letter
``written[l - k]``.  Mutation sequences are lists in written order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import qchar
from .seeds import Matrix, Seed, compatibleLambda


class WordError(Exception):
    pass


class NotAdaptable(WordError):
    pass


class Word:
    def __init__(self, letters: Sequence[int], cartan: Sequence[Sequence[int]]):
        self.written = tuple(int(x) for x in letters)
        self.cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        r = len(self.cartan)
        self.r = r
        self.l = len(self.written)
        for i in range(r):
            if len(self.cartan[i]) != r or self.cartan[i][i] != 2:
                raise WordError("Cartan matrix must be square with diagonal 2")
            for j in range(r):
                if self.cartan[i][j] != self.cartan[j][i] or (i != j and self.cartan[i][j] > 0):
                    raise WordError("Cartan matrix must be symmetric with nonpositive off-diagonal")
        if any(not 1 <= x <= r for x in self.written):
            raise WordError("letter outside 1..r")
        if set(self.written) != set(range(1, r + 1)):
            raise WordError("every letter must appear in the word")
        self.pos = {}
        for k in range(1, self.l + 1):
            self.pos.setdefault(self.letter(k), []).append(k)

    def letter(self, k: int) -> int:
        return self.written[self.l - k]

    def c(self, i: int, j: int) -> int:
        return self.cartan[i - 1][j - 1]

    # positional indices

    def plus(self, k: int, i: int | None = None) -> int:
        i = self.letter(k) if i is None else i
        return next((s for s in self.pos[i] if s > k), self.l + 1)

    def minus(self, k: int, i: int | None = None) -> int:
        i = self.letter(k) if i is None else i
        return max((s for s in self.pos[i] if s < k), default=0)

    def kmax(self, k: int) -> int:
        return self.pos[self.letter(k)][-1]

    def kmin(self, k: int) -> int:
        return self.pos[self.letter(k)][0]

    def max_of(self, i: int) -> int:
        return self.pos[i][-1]

    def min_of(self, i: int) -> int:
        return self.pos[i][0]

    def mult(self, i: int, a: int = 1, b: int | None = None) -> int:
        b = self.l if b is None else b
        return sum(1 for s in self.pos[i] if a <= s <= b)

    def m_plus(self, k: int) -> int:
        return self.mult(self.letter(k), k, self.l) - 1

    def m_minus(self, k: int) -> int:
        return self.mult(self.letter(k), 1, k) - 1

    def offset(self, k: int, d: int) -> int:
        """k[d]; negative d walks down the chain."""
        chain = self.pos[self.letter(k)]
        idx = chain.index(k) + d
        if not 0 <= idx < len(chain):
            raise WordError(f"offset {k}[{d}] out of range")
        return chain[idx]

    def level(self, k: int) -> int:
        return self.mult(self.letter(k), self.kmin(k), k)

    @property
    def frozen(self) -> list[int]:
        return sorted(self.max_of(i) for i in range(1, self.r + 1))

    @property
    def exchangeable(self) -> list[int]:
        fr = set(self.frozen)
        return [k for k in range(1, self.l + 1) if k not in fr]

    def to_json(self) -> dict:
        return {"cartan": [list(r) for r in self.cartan], "word": list(self.written)}

    @classmethod
    def from_json(cls, data: dict) -> Word:
        return cls(data["word"], data["cartan"])


def wordIndices(w: Word) -> dict:
    table = {}
    for k in range(1, w.l + 1):
        table[k] = {
            "letter": w.letter(k),
            "max": w.kmax(k),
            "min": w.kmin(k),
            "plus": w.plus(k),
            "minus": w.minus(k),
            "m_plus": w.m_plus(k),
            "m_minus": w.m_minus(k),
            "level": w.level(k),
            "offsets": w.pos[w.letter(k)][w.pos[w.letter(k)].index(k):],
        }
    return {
        "l": w.l,
        "r": w.r,
        "positions": table,
        "max_of": {i: w.max_of(i) for i in range(1, w.r + 1)},
        "min_of": {i: w.min_of(i) for i in range(1, w.r + 1)},
        "frozen": w.frozen,
    }


# the ice quiver

def gammaArrows(w: Word) -> dict[tuple[int, int], int]:
    """Arrow multiplicities (source, target) between positions."""
    arrows: dict[tuple[int, int], int] = {}
    for s in range(1, w.l + 1):
        sp = w.plus(s)
        if sp <= w.l:
            arrows[s, sp] = arrows.get((s, sp), 0) + 1
        for t in range(s + 1, w.l + 1):
            c = -w.c(w.letter(s), w.letter(t))
            if c and w.plus(t) >= sp > t:
                arrows[t, s] = arrows.get((t, s), 0) + c
    return arrows


@dataclass
class WordSeed:
    """The seed of a word plus the position <-> internal index maps.

    Internal indices list exchangeable positions in increasing order,
    then the frozen ones.
    """

    word: Word
    seed: Seed
    order: list[int]
    index: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {k: idx + 1 for idx, k in enumerate(self.order)}

    def to_internal(self, seq: Iterable[int]) -> list[int]:
        return [self.index[k] for k in seq]

    def to_positions(self, seq: Iterable[int]) -> list[int]:
        return [self.order[i - 1] for i in seq]

    def perm_internal(self, sigma: dict[int, int]) -> dict[int, int]:
        """sigma on exchangeable internal indices (it fixes the frozen ones)."""
        n = self.seed.n
        return {self.index[k]: self.index[v] for k, v in sigma.items() if self.index[k] <= n}

    def b_positions(self, s: int, t: int) -> int:
        return self.seed.b(self.index[s], self.index[t])


def buildGammaSeed(w: Word, lam: Sequence[Sequence[int]] | None = None, seed_id: str = "t0") -> WordSeed:
    """B from the arrows of the ice quiver.

    Without an explicit Lambda (internal order) a compatible one is solved
    for; pass ``lambdaFromNForm`` output for the quantization coming from
    characters.
    """
    order = w.exchangeable + w.frozen
    n = len(w.exchangeable)
    arrows = gammaArrows(w)
    index = {k: idx for idx, k in enumerate(order)}
    btilde = [[0] * n for _ in range(w.l)]
    for (s, t), c in arrows.items():
        i, j = index[s], index[t]
        if j < n:
            btilde[i][j] += c
        if i < n:
            btilde[j][i] -= c
    if lam is None:
        lam = compatibleLambda(btilde) if n else [[0] * w.l for _ in range(w.l)]
    labels = tuple(f"X{k}" for k in order)
    return WordSeed(w, Seed(seed_id, btilde, lam, labels=labels), order)


# mutation sequences

def glsData(w: Word) -> tuple[list[int], dict[int, int]]:
    """(Sigma, sigma) in positions; Sigma in written order."""
    seq: list[int] = []
    for k in range(w.l, 0, -1):
        top = w.mult(w.letter(k), k, w.l) - 2
        base = w.kmin(k)
        seq.extend(w.offset(base, d) for d in range(top, -1, -1))
    sigma = {}
    for i in range(1, w.r + 1):
        chain = w.pos[i]
        m = len(chain)
        sigma[chain[-1]] = chain[-1]
        for d in range(m - 1):
            sigma[chain[d]] = chain[m - 2 - d]
    return seq, dict(sorted(sigma.items()))


def kSequence(w: Word, k: int) -> list[int]:
    """The per-position block of the GLS sequence, written order."""
    top = w.mult(w.letter(k), k, w.l) - 2
    return [w.offset(w.kmin(k), d) for d in range(top, -1, -1)]


def upperSequence(w: Word, k: int) -> list[int]:
    """[k^max[-m_k^-], ..., k^max[-1]] in written order."""
    top = w.kmax(k)
    return [w.offset(top, -d) for d in range(w.m_minus(k), 0, -1)]


def altSequence(w: Word) -> tuple[list[int], list[int]]:
    """(Sigma^i, (sigma Sigma^i)^{-1}) in positions, written order."""
    sigma_seq: list[int] = []
    for k in range(w.l, 0, -1):
        base = w.kmin(k)
        sigma_seq.extend(w.offset(base, d) for d in range(w.m_minus(k)))
    back: list[int] = []
    for k in range(1, w.l + 1):
        back.extend(upperSequence(w, k))
    return sigma_seq, back


# adaptability

def sinkOrientation(w: Word) -> list[tuple[int, int]]:
    """The only orientation for which the word could be a sink sequence."""
    out = []
    for i in range(1, w.r + 1):
        for j in range(1, w.r + 1):
            if i != j and w.c(i, j) < 0 and w.min_of(i) < w.min_of(j):
                out.append((j, i))
    return sorted(out)


def isSinkSequence(w: Word, orientation: Sequence[tuple[int, int]]) -> bool:
    arrows = {tuple(a) for a in orientation}
    for k in range(1, w.l + 1):
        i = w.letter(k)
        if any(s == i for s, _ in arrows):
            return False
        arrows = {(t, s) if i in (s, t) else (s, t) for s, t in arrows}
    return True


@dataclass
class Adaptable:
    word: Word
    a: list[int]
    sink_orientation: list[tuple[int, int]]
    orientation: list[tuple[int, int]]
    grading: qchar.AcyclicGrading

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "sink_orientation": [list(x) for x in self.sink_orientation],
            "orientation": [list(x) for x in self.orientation],
            "xi": list(self.grading.xi),
        }


def adaptableData(w: Word, orientation: Sequence[tuple[int, int]] | None = None, anchor: int = 0) -> Adaptable:
    """An adaptable multidegree with min a_k = anchor.

    The orientation fixes the repetition quiver (heights and signs eps);
    it defaults to the reverse of the sink orientation.
    """
    if anchor % 2:
        raise WordError("anchor must be even")
    sink = sinkOrientation(w)
    if not isSinkSequence(w, sink):
        raise NotAdaptable("the word is not a sink sequence of any orientation")
    target = sorted((t, s) for s, t in sink)
    orient = target if orientation is None else sorted(tuple(map(int, x)) for x in orientation)
    gr = qchar.AcyclicGrading(w.cartan, orient)
    # levels c_i of the vertices (min i, a - 1): an arrow i -> j of the
    # target orientation sits at c_j = c_i - 1 + eps_ij
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(1, w.r + 1)}
    for s, t in target:
        d = -1 + gr.eps(s, t)
        adj[s].append((t, d))
        adj[t].append((s, -d))
    c: dict[int, int] = {}
    for root in range(1, w.r + 1):
        if root in c:
            continue
        c[root] = -1
        todo = deque([root])
        while todo:
            i = todo.popleft()
            for j, d in adj[i]:
                if j not in c:
                    c[j] = c[i] + d
                    todo.append(j)
                elif c[j] != c[i] + d:
                    raise NotAdaptable("no consistent embedding for this orientation")
    a = [0] * w.l
    for i in range(1, w.r + 1):
        for d, k in enumerate(w.pos[i]):
            a[k - 1] = c[i] + 1 - 2 * d
    shift = anchor - min(a)
    a = [x + shift for x in a]
    return Adaptable(w, a, sink, orient, gr)


# embeddings into the Y-torus

def thetaX(w: Word, ad: Adaptable, k: int) -> dict:
    return qchar.kr_vector(w.letter(k), w.m_minus(k) + 1, ad.a[k - 1])


def thetaY(w: Word, ad: Adaptable, k: int) -> dict:
    return qchar.gscale(qchar.aMonomial(w.letter(k), ad.a[k - 1] - 1, ad.grading), -1)


def thetaMaps(w: Word, ad: Adaptable) -> tuple[dict[int, dict], dict[int, dict]]:
    """theta on the X_k and on the Y_k of exchangeable positions, by position."""
    return ({k: thetaX(w, ad, k) for k in range(1, w.l + 1)},
            {k: thetaY(w, ad, k) for k in w.exchangeable})


def thetaYConsistent(w: Word, ad: Adaptable) -> bool:
    """theta(Y_k) agrees with theta(X^{B e_k}) for every exchangeable k."""
    arrows = gammaArrows(w)
    xs = {k: thetaX(w, ad, k) for k in range(1, w.l + 1)}
    for k in w.exchangeable:
        acc: dict = {}
        for (s, t), c in arrows.items():
            if t == k:
                acc = qchar.gadd(acc, qchar.gscale(xs[s], c))
            if s == k:
                acc = qchar.gadd(acc, qchar.gscale(xs[t], -c))
        if acc != thetaY(w, ad, k):
            return False
    return True


def thetaInvDeg(w: Word, beta: Sequence[int]) -> tuple[int, ...]:
    """theta^{-1} of sum beta_k beta_k as a position-indexed degree."""
    out = [0] * w.l
    for k, x in enumerate(beta, start=1):
        if not x:
            continue
        out[k - 1] += x
        lower = w.minus(k)
        if lower:
            out[lower - 1] -= x
    return tuple(out)


def lambdaFromNForm(w: Word, ad: Adaptable, internal: bool = True) -> Matrix:
    """Lambda(e_k, e_s) = N(theta X_k, theta X_s); internal order by default."""
    xs = {k: thetaX(w, ad, k) for k in range(1, w.l + 1)}
    order = (w.exchangeable + w.frozen) if internal else list(range(1, w.l + 1))
    return tuple(tuple(qchar.nForm(xs[s], xs[t], ad.grading) for t in order) for s in order)
