"""Exact linear algebra over Q and cyclotomic fields.

Everything here is generic in the scalar type: entries may be ``Fraction``
or :class:`~thetaconn.cyclotomic.CycScalar` and are never approximated.
Matrices are lists of rows.  The workhorse is :class:`SparseEchelon`, an
incremental row-echelon builder over dict rows; it keeps banded systems
banded as long as callers order their columns sensibly.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Row = Dict[int, object]
Matrix = List[List[object]]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x):
    return Fraction(x) if isinstance(x, int) else x


def zeros(n: int) -> list:
    return [ZERO] * n


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in m:
        s = ZERO
        for a, b in zip(row, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    n = len(cols)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        new = []
        for j in range(n):
            col = cols[j]
            s = ZERO
            for k, x in nz:
                y = col[k]
                if y:
                    s = s + x * y
            new.append(s)
        out.append(new)
    return out


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_add(a, b) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero_matrix(m) -> bool:
    return not any(x for row in m for x in row)


def vec_add(u, v) -> list:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v) -> list:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v) -> list:
    return [c * a for a in v]


def lin_comb(coeffs: Sequence, vectors: Sequence[Sequence], n: Optional[int] = None) -> list:
    if n is None:
        n = len(vectors[0]) if vectors else 0
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] = out[i] + c * x
    return out


def to_row(v: Sequence) -> Row:
    return {i: as_scalar(x) for i, x in enumerate(v) if x}


class SparseEchelon:
    """Incrementally maintained echelon form of a set of sparse rows.

    Each stored row is normalised so that its smallest column (the pivot)
    carries the coefficient 1.
    """

    def __init__(self, ncols: Optional[int] = None):
        self.ncols = ncols
        self.pivots: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        """Remainder of ``row`` modulo the stored rows (a fresh dict)."""
        row = {c: as_scalar(v) for c, v in row.items() if v}
        pivots = self.pivots
        # stored rows only reach columns >= their pivot, so one sweep in
        # increasing column order suffices
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            f = row.get(c)
            if not f:
                continue
            p = pivots.get(c)
            if p is None:
                continue
            for k, v in p.items():
                old = row.get(k)
                nv = (ZERO if old is None else old) - f * v
                if nv:
                    if old is None:
                        heapq.heappush(heap, k)
                    row[k] = nv
                elif old is not None:
                    del row[k]
        return row

    def add(self, row: Row) -> bool:
        """Insert ``row``; return True when it was independent."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = ONE / row[c]
        normed = {k: v * inv for k, v in row.items()}
        normed[c] = ONE
        self.pivots[c] = normed
        return True

    def extend(self, rows: Iterable[Row]) -> "SparseEchelon":
        for r in rows:
            self.add(r)
        return self

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> List[Tuple[int, Row]]:
        """Fully reduced rows (pivot columns cleared elsewhere), by pivot."""
        rows = {c: dict(r) for c, r in self.pivots.items()}
        order = sorted(rows, reverse=True)
        for c in order:
            rc = rows[c]
            for d in order:
                if d >= c:
                    continue
                rd = rows[d]
                f = rd.get(c)
                if not f:
                    continue
                for k, v in rc.items():
                    nv = rd.get(k, ZERO) - f * v
                    if nv:
                        rd[k] = nv
                    else:
                        rd.pop(k, None)
        return [(c, rows[c]) for c in sorted(rows)]

    def kernel_basis(self, ncols: Optional[int] = None) -> List[Row]:
        """Basis of {v : r.v = 0 for all stored rows r} as sparse vectors."""
        n = self.ncols if ncols is None else ncols
        if n is None:
            raise ValueError("number of columns unknown")
        reduced = self.reduced_rows()
        pivot_cols = {c for c, _ in reduced}
        out = []
        for f in range(n):
            if f in pivot_cols:
                continue
            vec: Row = {f: ONE}
            for c, r in reduced:
                x = r.get(f)
                if x:
                    vec[c] = -x
            out.append(vec)
        return out


def rref(rows: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    n = len(rows[0]) if rows else 0
    ech = SparseEchelon(n).extend(to_row(r) for r in rows)
    out, piv = [], []
    for c, r in ech.reduced_rows():
        dense = [ZERO] * n
        for k, v in r.items():
            dense[k] = v
        out.append(dense)
        piv.append(c)
    return out, piv


def rank(rows: Sequence[Sequence]) -> int:
    return SparseEchelon().extend(to_row(r) for r in rows).rank


def nullspace(m: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis (as dense vectors) of the right kernel {v : m v = 0}."""
    n = ncols if ncols is not None else (len(m[0]) if m else 0)
    ech = SparseEchelon(n).extend(to_row(r) for r in m)
    out = []
    for vec in ech.kernel_basis():
        dense = [ZERO] * n
        for k, v in vec.items():
            dense[k] = v
        out.append(dense)
    return out


def nullity(m: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    n = ncols if ncols is not None else (len(m[0]) if m else 0)
    return n - rank(m)


class Subspace:
    """A subspace of K^n stored by its reduced echelon basis.

    The canonical form makes equality of subspaces equality of matrices.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: Sequence[Sequence] = (), *, _canonical=False):
        self.ambient = ambient
        if _canonical:
            self.basis = tuple(tuple(r) for r in basis)
            self.pivots = tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)
        else:
            vecs = [list(v) for v in basis]
            for v in vecs:
                if len(v) != ambient:
                    raise ValueError("vector length does not match ambient dimension")
            red, piv = rref(vecs) if vecs else ([], [])
            self.basis = tuple(tuple(r) for r in red)
            self.pivots = tuple(piv)

    @classmethod
    def coordinate(cls, ambient: int, indices: Iterable[int]) -> "Subspace":
        rows = []
        for i in sorted(set(indices)):
            r = [ZERO] * ambient
            r[i] = ONE
            rows.append(r)
        return cls(ambient, rows, _canonical=True)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, (), _canonical=True)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __bool__(self) -> bool:
        return bool(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"

    def coordinates(self, v: Sequence) -> list:
        """Coefficients of ``v`` in the echelon basis; ValueError if v is outside."""
        coeffs = [as_scalar(v[p]) for p in self.pivots]
        recon = lin_comb(coeffs, self.basis, self.ambient)
        if any(a != b for a, b in zip(recon, v)):
            raise ValueError("vector does not lie in the subspace")
        return coeffs

    def contains(self, v: Sequence) -> bool:
        try:
            self.coordinates(v)
        except ValueError:
            return False
        return True

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    __add__ = join

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient)
        # a.U = b.W  <=>  [U^T | -W^T] (a, b) = 0
        cols = [list(u) for u in self.basis] + [[-x for x in w] for w in other.basis]
        sys_rows = transpose(cols)
        ker = nullspace(sys_rows, len(cols))
        vecs = [lin_comb(k[: self.dim], self.basis, self.ambient) for k in ker]
        return Subspace(self.ambient, vecs)

    def image(self, m: Sequence[Sequence]) -> "Subspace":
        """Image of the subspace under the matrix m (acting on columns)."""
        return Subspace(len(m), [matvec(m, b) for b in self.basis])

    def kernel_of(self, m: Sequence[Sequence]) -> "Subspace":
        """{v in self : m v = 0}."""
        if not self.basis:
            return Subspace.zero(self.ambient)
        cols = [matvec(m, b) for b in self.basis]
        ker = nullspace(transpose(cols), self.dim)
        return Subspace(self.ambient, [lin_comb(k, self.basis, self.ambient) for k in ker])

    def independent_of(self, other: "Subspace") -> bool:
        return self.join(other).dim == self.dim + other.dim
