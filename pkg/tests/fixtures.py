"""Shared seeds and words used across the test modules."""
from __future__ import annotations

from qcluster.qcoeff import QScalar
from qcluster.seeds import ClusterState, Seed
from qcluster.words import Word


def quiver(m: int, n: int, arrows) -> list[list[int]]:
    """Exchange matrix of an ice quiver given by arrows i -> j."""
    B = [[0] * n for _ in range(m)]
    for i, j in arrows:
        if j <= n:
            B[i - 1][j - 1] += 1
        if i <= n:
            B[j - 1][i - 1] -= 1
    return B


def a2_seed() -> Seed:
    return Seed("t0", [[0, -1], [1, 0]], [[0, -1], [1, 0]])


# A_3 quiver with principal-type frozen vertices 5..8
A3_B = quiver(8, 4, [(3, 2), (2, 1), (4, 2), (1, 4), (5, 1), (6, 2), (7, 3), (8, 4)])
A3_L = [
    [0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [1, 0, 0, 0, 0, 1, 0, -1],
    [0, 1, 0, 0, -1, 0, 1, 1],
    [0, 0, 1, 0, 0, -1, 0, 0],
    [0, 0, 0, 1, 1, -1, 0, 0],
]
A3_SIGMA_SEQ = [1, 3, 2, 4, 1]
A3_SIGMA = {1: 4, 2: 2, 3: 3, 4: 1}


def a3_seed() -> Seed:
    return Seed("t", A3_B, A3_L)


PAIR1_B = [[0, -2], [2, 0], [1, 0], [0, 1]]
PAIR1_L = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 2], [0, 1, -2, 0]]
PAIR2_B = [[0, -2], [2, 0], [-1, 2], [0, -1]]
PAIR2_L = [[0, 0, 1, 2], [0, 0, 0, 1], [-1, 0, 0, 2], [-2, -1, -2, 0]]


def pair_seeds() -> tuple[Seed, Seed]:
    return Seed("s1", PAIR1_B, PAIR1_L), Seed("s2", PAIR2_B, PAIR2_L)


def initial(seed: Seed) -> ClusterState:
    return ClusterState.initial(seed)


def q(h: int, c: int = 1) -> QScalar:
    """c q^{h/2}."""
    return QScalar.qpow(h, c)


def cartan_a(r: int) -> list[list[int]]:
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]


TYPE_A_WORD = (1, 2, 1, 3, 2, 1, 4, 3, 2, 1)
EMBED_WORD = (2, 1, 3, 2, 1, 4, 3, 2, 1, 5, 4, 3, 2)
WILD_WORD = (2, 3, 2, 1, 2, 1, 3, 1, 2, 1)
WILD_CARTAN = [[2, -3, -2], [-3, 2, -2], [-2, -2, 2]]


def type_a_word() -> Word:
    return Word(TYPE_A_WORD, cartan_a(4))


def embed_word() -> Word:
    return Word(EMBED_WORD, cartan_a(5))


def wild_word() -> Word:
    return Word(WILD_WORD, WILD_CARTAN)
