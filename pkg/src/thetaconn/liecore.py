"""Simple Lie algebras with Chevalley bases over the integers.

Roots are integer vectors in the basis of simple roots.  Simple roots are
numbered as in Bourbaki except for G2, where node 1 is the long root and
node 2 the short one, so the highest root of G2 is 2*a1 + 3*a2.

Structure constants follow the extraspecial-pair convention: positive roots
are ordered by height and then lexicographically, N(a, b) = +(p + 1) on every
extraspecial pair, and all other constants are forced by the Chevalley
relations (Carter, *Simple groups of Lie type*, ch. 4).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import ZERO, Matrix, as_scalar

Root = Tuple[int, ...]

MAX_RANK = 8


class InvalidTypeError(ValueError):
    """Raised for Cartan types that do not exist or exceed the rank cap."""


def _chain_gram(n: int, diag: Sequence[int], off: Sequence[int]) -> List[List[int]]:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = diag[i]
    for i in range(n - 1):
        g[i][i + 1] = g[i + 1][i] = off[i]
    return g


def gram_matrix(series: str, rank: int) -> List[List[int]]:
    """Integer Gram matrix (a_i, a_j) of the simple roots."""
    n = rank
    if not isinstance(series, str) or series.upper() not in "ABCDEFG" or len(series) != 1:
        raise InvalidTypeError(f"unknown series {series!r}")
    s = series.upper()
    if not isinstance(n, int) or n < 1 or n > MAX_RANK:
        raise InvalidTypeError(f"rank must be between 1 and {MAX_RANK}, got {rank!r}")
    if s == "A":
        return _chain_gram(n, [2] * n, [-1] * (n - 1))
    if s == "B":
        if n < 2:
            raise InvalidTypeError("B_n needs n >= 2")
        return _chain_gram(n, [4] * (n - 1) + [2], [-2] * (n - 1))
    if s == "C":
        if n < 2:
            raise InvalidTypeError("C_n needs n >= 2")
        return _chain_gram(n, [2] * (n - 1) + [4], [-1] * (n - 2) + [-2])
    if s == "D":
        if n < 4:
            raise InvalidTypeError("D_n needs n >= 4")
        g = _chain_gram(n, [2] * n, [-1] * (n - 2) + [0])
        g[n - 3][n - 1] = g[n - 1][n - 3] = -1
        return g
    if s == "E":
        if n not in (6, 7, 8):
            raise InvalidTypeError("E_n needs n in {6, 7, 8}")
        g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for a, b in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]:
            if a <= n and b <= n:
                g[a - 1][b - 1] = g[b - 1][a - 1] = -1
        return g
    if s == "F":
        if n != 4:
            raise InvalidTypeError("F_n needs n = 4")
        return _chain_gram(4, [4, 4, 2, 2], [-2, -2, -1])
    if n != 2:
        raise InvalidTypeError("G_n needs n = 2")
    return [[6, -3], [-3, 2]]


@dataclass(frozen=True)
class RootSystem:
    """An irreducible reduced root system given in simple-root coordinates."""

    series: str
    rank: int
    gram: Tuple[Tuple[int, ...], ...]
    cartan: Tuple[Tuple[int, ...], ...]
    roots: Tuple[Root, ...]
    highest_root: Root
    marks: Tuple[int, ...]
    index: Dict[Root, int] = field(repr=False, compare=False)

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def positive_roots(self) -> Tuple[Root, ...]:
        return self.roots[: len(self.roots) // 2]

    @property
    def num_roots(self) -> int:
        return len(self.roots)

    @cached_property
    def coxeter_number(self) -> int:
        return sum(self.marks) + 1

    def simple_root(self, i: int) -> Root:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def is_root(self, a: Sequence[int]) -> bool:
        return tuple(a) in self.index

    def inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) if a[i]
                   for j in range(self.rank) if b[j])

    def norm(self, a: Sequence[int]) -> int:
        return self.inner(a, a)

    def pairing(self, a: Sequence[int], i: int) -> int:
        """<a, a_i^vee> = 2 (a, a_i) / (a_i, a_i)."""
        return sum(a[j] * self.cartan[i][j] for j in range(self.rank))

    def height(self, a: Sequence[int]) -> int:
        return sum(a)

    def reflect(self, a: Sequence[int], i: int) -> Root:
        p = self.pairing(a, i)
        return tuple(x - (p if j == i else 0) for j, x in enumerate(a))

    def coroot(self, a: Sequence[int]) -> Tuple[int, ...]:
        """Coefficients of a^vee in the simple coroots."""
        na = self.norm(a)
        out = []
        for i in range(self.rank):
            c = Fraction(a[i] * self.gram[i][i], na)
            if c.denominator != 1:
                raise ArithmeticError("non-integral coroot coefficient")
            out.append(int(c))
        return tuple(out)

    def root_string_down(self, b: Sequence[int], a: Sequence[int]) -> int:
        """Largest p >= 0 with b - p*a a root."""
        p = 0
        while self.is_root(tuple(x - (p + 1) * y for x, y in zip(b, a))):
            p += 1
        return p

    @cached_property
    def short_length(self) -> int:
        return min(self.gram[i][i] for i in range(self.rank))


def build_root_system(series: str, rank: int) -> RootSystem:
    """Generate the root system of type (series, rank) from its Gram matrix."""
    gram = gram_matrix(series, rank)
    n = rank
    cartan = tuple(tuple(2 * gram[i][j] // gram[i][i] for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(n):
            if 2 * gram[i][j] % gram[i][i]:
                raise InvalidTypeError("Gram matrix is not crystallographic")
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    pos = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for a in layer:
            for i in range(n):
                if a == simple[i]:
                    continue
                p = 0
                while True:
                    cand = tuple(x - (p + 1) * (1 if j == i else 0) for j, x in enumerate(a))
                    if cand in pos:
                        p += 1
                    else:
                        break
                pair = sum(a[j] * cartan[i][j] for j in range(n))
                if p - pair > 0:
                    b = tuple(x + (1 if j == i else 0) for j, x in enumerate(a))
                    if b not in pos:
                        pos.add(b)
                        nxt.append(b)
        layer = nxt
    positive = sorted(pos, key=lambda r: (sum(r), r))
    roots = tuple(positive) + tuple(tuple(-x for x in r) for r in positive)
    highest = positive[-1]
    index = {r: k for k, r in enumerate(roots)}
    return RootSystem(
        series=series.upper(), rank=n, gram=tuple(tuple(r) for r in gram), cartan=cartan,
        roots=roots, highest_root=highest, marks=highest, index=index,
    )


def parse_type(label: str) -> Tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", label or "")
    if not m:
        raise InvalidTypeError(f"cannot parse Cartan type {label!r}")
    series, rank = m.group(1).upper(), int(m.group(2))
    gram_matrix(series, rank)  # rejects impossible ranks
    return series, rank


def _add(a, b) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a) -> Root:
    return tuple(-x for x in a)


def _is_positive(a) -> bool:
    return sum(a) > 0


def structure_constants(rs: RootSystem) -> Dict[Tuple[Root, Root], int]:
    """N(a, b) for every ordered pair of roots with a + b a root."""
    order = {r: k for k, r in enumerate(rs.positive_roots)}
    pos_table: Dict[Tuple[Root, Root], int] = {}

    def N(x: Root, y: Root) -> Fraction:
        s = _add(x, y)
        if not rs.is_root(s):
            return Fraction(0)
        px, py = _is_positive(x), _is_positive(y)
        if px and py:
            return Fraction(pos_table[(x, y)])
        if not px and not py:
            return -N(_neg(x), _neg(y))
        z = _neg(s)
        if _is_positive(y) == _is_positive(z):
            return Fraction(rs.norm(z), rs.norm(x)) * N(y, z)
        return Fraction(rs.norm(z), rs.norm(y)) * N(z, x)

    for xi in rs.positive_roots:
        decomps = [a for a in rs.positive_roots
                   if order[a] < order[xi] and rs.is_root(tuple(u - v for u, v in zip(xi, a)))
                   and _is_positive(tuple(u - v for u, v in zip(xi, a)))]
        if not decomps:
            continue
        a1 = decomps[0]
        b1 = tuple(u - v for u, v in zip(xi, a1))
        p = rs.root_string_down(b1, a1)
        pos_table[(a1, b1)] = p + 1
        pos_table[(b1, a1)] = -(p + 1)
        nxi = rs.norm(xi)
        for a in decomps[1:]:
            b = tuple(u - v for u, v in zip(xi, a))
            if order[a] > order[b] or (a, b) in pos_table:
                continue
            t1 = Fraction(0)
            d1 = _add(b, _neg(a1))
            if rs.is_root(d1):
                t1 = N(b, _neg(a1)) * N(a, _neg(b1)) / rs.norm(d1)
            t2 = Fraction(0)
            d2 = _add(a, _neg(a1))
            if rs.is_root(d2):
                t2 = N(_neg(a1), a) * N(b, _neg(b1)) / rs.norm(d2)
            val = Fraction(nxi) / N(_neg(a1), _neg(b1)) * (-t1 - t2)
            if val.denominator != 1:
                raise ArithmeticError(f"non-integral structure constant at {a}, {b}")
            pos_table[(a, b)] = int(val)
            pos_table[(b, a)] = -int(val)

    out: Dict[Tuple[Root, Root], int] = {}
    for x in rs.roots:
        for y in rs.roots:
            if rs.is_root(_add(x, y)):
                v = N(x, y)
                if v.denominator != 1:
                    raise ArithmeticError("non-integral structure constant")
                out[(x, y)] = int(v)
    return out


@dataclass(frozen=True, eq=False)
class ChevalleyAlgebra:
    """A simple Lie algebra with basis H_1..H_l followed by E_a, a in rs.roots.

    ``table[a][b]`` is the bracket of basis elements a and b as a tuple of
    (index, integer coefficient) pairs.
    """

    rs: RootSystem
    table: Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...] = field(repr=False)
    N: Dict[Tuple[Root, Root], int] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.rs.rank + self.rs.num_roots

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def label(self) -> str:
        return self.rs.label

    def root_index(self, a: Sequence[int]) -> int:
        return self.rs.rank + self.rs.index[tuple(a)]

    def weight(self, i: int) -> Root:
        """Root attached to basis element i (the zero vector for H_i)."""
        if i < self.rs.rank:
            return (0,) * self.rs.rank
        return self.rs.roots[i - self.rs.rank]

    @cached_property
    def basis_labels(self) -> Tuple[str, ...]:
        labels = [f"H{i + 1}" for i in range(self.rs.rank)]
        for r in self.rs.roots:
            labels.append("E[" + ",".join(str(x) for x in r) + "]")
        return tuple(labels)

    def basis_vector(self, i: int) -> list:
        v = [ZERO] * self.dim
        v[i] = Fraction(1)
        return v

    def root_vector(self, a: Sequence[int]) -> list:
        return self.basis_vector(self.root_index(a))

    def cartan_vector(self, coeffs: Sequence) -> list:
        v = [ZERO] * self.dim
        for i, c in enumerate(coeffs):
            v[i] = as_scalar(c)
        return v

    def bracket(self, x: Sequence, y: Sequence) -> list:
        out = [ZERO] * self.dim
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    out[k] = out[k] + ab * c
        return out

    def bracket_basis(self, i: int, j: int) -> Tuple[Tuple[int, int], ...]:
        return self.table[i][j]

    @cached_property
    def killing(self) -> Matrix:
        return killing_form(self)

    def killing_value(self, x: Sequence, y: Sequence):
        k = self.killing
        s = ZERO
        for i, a in enumerate(x):
            if a:
                row = k[i]
                for j, b in enumerate(y):
                    if b and row[j]:
                        s = s + a * row[j] * b
        return s

    def weight_of_vector(self, x: Sequence) -> Optional[Root]:
        """Common weight of a nonzero weight vector, None if mixed."""
        ws = {self.weight(i) for i, a in enumerate(x) if a}
        return ws.pop() if len(ws) == 1 else None


def chevalley_constants(rs: RootSystem) -> ChevalleyAlgebra:
    """Full integer bracket table of the Chevalley basis of the algebra of rs."""
    n = rs.rank
    Nc = structure_constants(rs)
    dim = n + rs.num_roots
    table: List[List[Tuple[Tuple[int, int], ...]]] = [[() for _ in range(dim)] for _ in range(dim)]
    for k, a in enumerate(rs.roots):
        ia = n + k
        for i in range(n):
            c = rs.pairing(a, i)
            if c:
                table[i][ia] = ((ia, c),)
                table[ia][i] = ((ia, -c),)
        for l, b in enumerate(rs.roots):
            ib = n + l
            s = _add(a, b)
            if not any(s):
                h = rs.coroot(a)
                table[ia][ib] = tuple((i, h[i]) for i in range(n) if h[i])
            elif (a, b) in Nc:
                table[ia][ib] = ((n + rs.index[s], Nc[(a, b)]),)
    return ChevalleyAlgebra(rs=rs, table=tuple(tuple(r) for r in table), N=Nc)


def simple_lie_algebra(series: str, rank: Optional[int] = None) -> ChevalleyAlgebra:
    """Convenience constructor accepting either ('G', 2) or 'G2'."""
    if rank is None:
        series, rank = parse_type(series)
    return chevalley_constants(build_root_system(series, rank))


def killing_form(alg: ChevalleyAlgebra) -> Matrix:
    """tr(ad x ad y) on the Chevalley basis, summed over weight-compatible pairs only."""
    dim = alg.dim
    table = alg.table
    n = alg.rs.rank
    kmat = [[ZERO] * dim for _ in range(dim)]

    def trace_pair(i: int, j: int) -> int:
        s = 0
        for b in range(dim):
            for k, c in table[j][b]:
                for l, d in table[i][k]:
                    if l == b:
                        s += c * d
        return s

    for i in range(n):
        for j in range(i, n):
            v = Fraction(trace_pair(i, j))
            kmat[i][j] = kmat[j][i] = v
    for k, a in enumerate(alg.rs.positive_roots):
        ia = alg.root_index(a)
        ib = alg.root_index(_neg(a))
        v = Fraction(trace_pair(ia, ib))
        kmat[ia][ib] = kmat[ib][ia] = v
    return kmat


def adjoint_matrix(alg: ChevalleyAlgebra, x: Sequence) -> Matrix:
    """Matrix of ad(x) acting on column vectors in the Chevalley basis."""
    dim = alg.dim
    if len(x) != dim:
        raise ValueError(f"expected a vector of length {dim}, got {len(x)}")
    m = [[ZERO] * dim for _ in range(dim)]
    for a, xa in enumerate(x):
        if not xa:
            continue
        row = alg.table[a]
        for j in range(dim):
            for k, c in row[j]:
                m[k][j] = m[k][j] + xa * c
    return m
