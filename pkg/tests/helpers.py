"""Cached algebras and gradings shared across test modules."""

from fractions import Fraction
from functools import lru_cache

from thetaconn.gradings import make_grading
from thetaconn.liecore import simple_lie_algebra
from thetaconn.linalg import mat_sub, matmul


@lru_cache(maxsize=None)
def alg(label):
    return simple_lie_algebra(label)


def flip(n):
    return tuple(n - 1 - i for i in range(n))


@lru_cache(maxsize=None)
def grading(label, kac, perm=None):
    return make_grading(alg(label), tuple(kac), perm)


def fg(label):
    """Principal grading of the untwisted type."""
    a = alg(label)
    return grading(label, (1,) * (a.rank + 1))


def g2_sub():
    return grading("G2", (1, 1, 0))


def two_a(n):
    return grading(f"A{2 * n}", (1,) + (0,) * n, flip(2 * n))


def all_ones_x(g):
    return g.g1_vector([1] * len(g.g1_basis))


def matrix_model_sl(n_plus_1):
    """Map the Chevalley basis of A_n into gl_{n+1} via E_i -> e_{i,i+1}, extended by brackets."""
    a = alg(f"A{n_plus_1 - 1}")
    size = n_plus_1

    def unit(i, j):
        m = [[0] * size for _ in range(size)]
        m[i][j] = 1
        return m

    def comm(x, y):
        return mat_sub(matmul(x, y), matmul(y, x))

    rho = {}
    for i in range(a.rank):
        rho[a.root_index(a.rs.simple_root(i))] = unit(i, i + 1)
        rho[a.root_index(tuple(-c for c in a.rs.simple_root(i)))] = unit(i + 1, i)
        rho[i] = mat_sub(unit(i, i), unit(i + 1, i + 1))
    for sign in (1, -1):
        for root in a.rs.positive_roots:
            r = tuple(sign * c for c in root)
            idx = a.root_index(r)
            if idx in rho:
                continue
            for i in range(a.rank):
                simple = tuple(sign * c for c in a.rs.simple_root(i))
                rest = tuple(p - q for p, q in zip(r, simple))
                if a.rs.is_root(rest) and a.root_index(rest) in rho:
                    n = a.N[(simple, rest)]
                    m = comm(rho[a.root_index(simple)], rho[a.root_index(rest)])
                    rho[idx] = [[Fraction(v, n) for v in row] for row in m]
                    break
    return a, rho, comm


def matrix_image(rho, v, size):
    out = [[Fraction(0)] * size for _ in range(size)]
    for idx, c in enumerate(v):
        if c:
            for r in range(size):
                for s in range(size):
                    out[r][s] += c * rho[idx][r][s]
    return out


ACCEPTANCE_LINES = []
