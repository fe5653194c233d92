from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from thetaconn.cyclotomic import zeta
from thetaconn.linalg import (SparseEchelon, Subspace, identity, matmul, matvec, nullspace, rank, rref,
                              to_row)

small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sympy.Matrix(m).rank()


@given(matrices())
def test_rref_matches_sympy(m):
    ours, piv = rref(m)
    ref, spiv = sympy.Matrix(m).rref()
    assert tuple(piv) == tuple(spiv)
    for i, row in enumerate(ours):
        assert [sympy.Rational(c.numerator, c.denominator) for c in row] == list(ref.row(i))


@given(matrices())
def test_nullspace(m):
    ker = nullspace(m, len(m[0]))
    assert len(ker) == len(m[0]) - rank(m)
    for v in ker:
        assert not any(matvec(m, v))


@given(matrices(), matrices())
def test_dimension_formula(a, b):
    n = max(len(a[0]), len(b[0]))
    pad = lambda rows: [list(r) + [0] * (n - len(r)) for r in rows]
    u, w = Subspace(n, pad(a)), Subspace(n, pad(b))
    assert u.dim + w.dim == (u + w).dim + u.intersect(w).dim
    assert (u + w).contains_subspace(u)
    for v in u.intersect(w).basis:
        assert u.contains(v) and w.contains(v)


@given(matrices())
def test_subspace_canonical(m):
    u = Subspace(len(m[0]), m)
    shuffled = Subspace(len(m[0]), list(reversed(m)) + [[2 * c for c in m[0]]])
    assert u == shuffled and hash(u) == hash(shuffled)


def test_coordinates_roundtrip():
    u = Subspace(3, [[1, 2, 0], [0, 1, 1]])
    v = [Fraction(2), Fraction(5), Fraction(1)]
    c = u.coordinates(v)
    assert [sum(ci * b[j] for ci, b in zip(c, u.basis)) for j in range(3)] == v
    assert not u.contains([0, 0, 1])


def test_sparse_echelon_kernel():
    ech = SparseEchelon(4).extend(to_row(r) for r in [[1, 1, 0, 0], [0, 0, 1, -1], [1, 1, 1, -1]])
    assert ech.rank == 2
    assert len(ech.kernel_basis()) == 2


def test_cyclotomic_entries():
    z = zeta(3)
    m = [[1, z], [z * z, 1]]  # rank 1 since z * z^2 = 1
    assert rank(m) == 1
    assert matmul(identity(2), m) == m
