"""Torsion automorphisms from Kac coordinates and the gradings they induce.

A grading is specified by a pinned diagram automorphism sigma and a tuple of
normalized Kac coordinates (s_0, ..., s_l) indexed by the affine simple roots
of the pair (g, sigma).  The cocharacter lambda = m*x is recorded through its
integer pairings with the simple roots; g(k) is the lambda-weight k part of
g, and g_i(k) is the part of g(k) on which sigma acts by zeta_e^r with
i = k + r*m/e (mod m).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclotomic import zeta
from .liecore import ChevalleyAlgebra, Root, adjoint_matrix
from .linalg import (ONE, ZERO, Matrix, Subspace, identity, lin_comb, matmul, matvec,
                     nullspace, rank, transpose)


class GradingError(ValueError):
    """Invalid automorphism or Kac-coordinate input."""


class NotInG1Error(ValueError):
    """A vector expected in g_1 lies outside it."""


class SamplingExhausted(RuntimeError):
    """No sample satisfying the predicate was found within the retry budget."""


# ---------------------------------------------------------------------------
# diagram automorphisms


@dataclass(frozen=True, eq=False)
class DiagramAutomorphism:
    """Pinned automorphism of g induced by a Dynkin diagram symmetry."""

    alg: ChevalleyAlgebra
    node_perm: Tuple[int, ...]
    order: int
    matrix: Matrix = field(repr=False)
    root_signs: Dict[Root, int] = field(repr=False)

    @property
    def is_identity(self) -> bool:
        return self.order == 1

    def root_image(self, a: Sequence[int]) -> Root:
        out = [0] * len(a)
        for i, c in enumerate(a):
            out[self.node_perm[i]] = c
        return tuple(out)

    def apply(self, v: Sequence) -> list:
        return matvec(self.matrix, v)

    @cached_property
    def orbits(self) -> Tuple[Tuple[int, ...], ...]:
        seen, out = set(), []
        for i in range(len(self.node_perm)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.node_perm[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return tuple(out)

    @cached_property
    def orbit_of_node(self) -> Tuple[int, ...]:
        where = [0] * len(self.node_perm)
        for k, orb in enumerate(self.orbits):
            for j in orb:
                where[j] = k
        return tuple(where)


def _perm_order(perm: Sequence[int]) -> int:
    k, cur = 1, list(perm)
    ident = list(range(len(perm)))
    while cur != ident:
        cur = [perm[j] for j in cur]
        k += 1
    return k


def pinned_automorphism(alg: ChevalleyAlgebra, node_perm: Optional[Sequence[int]] = None) -> DiagramAutomorphism:
    """Extend a diagram symmetry (0-based node images) to an automorphism of g.

    sigma(E_i) = E_perm(i) and sigma(F_i) = F_perm(i) on the Chevalley
    generators; non-simple root vectors follow by bracketing.
    """
    rs = alg.rs
    n = rs.rank
    perm = tuple(range(n)) if node_perm is None else tuple(int(p) for p in node_perm)
    if sorted(perm) != list(range(n)):
        raise GradingError(f"{perm} is not a permutation of the {n} nodes")
    for i in range(n):
        for j in range(n):
            if rs.gram[perm[i]][perm[j]] != rs.gram[i][j]:
                raise GradingError(f"{perm} is not a symmetry of the {rs.label} diagram")
    order = _perm_order(perm)

    def img(a):
        out = [0] * n
        for i, c in enumerate(a):
            out[perm[i]] = c
        return tuple(out)

    signs: Dict[Root, int] = {}
    for a in rs.positive_roots:
        for sgn in (1, -1):
            r = tuple(sgn * x for x in a)
            if sum(a) == 1:
                signs[r] = 1
                continue
            i = next(i for i in range(n)
                     if a[i] > 0 and rs.is_root(tuple(x - (1 if j == i else 0) for j, x in enumerate(a))))
            ai = tuple(sgn * (1 if j == i else 0) for j in range(n))
            b = tuple(x - y for x, y in zip(r, ai))
            # E_r = [E_ai, E_b] / N(ai, b)
            c = Fraction(signs[b] * alg.N[(img(ai), img(b))], alg.N[(ai, b)])
            if c not in (1, -1):
                raise ArithmeticError("pinned automorphism sign is not +-1")
            signs[r] = int(c)
    dim = alg.dim
    mat = [[ZERO] * dim for _ in range(dim)]
    for i in range(n):
        mat[perm[i]][i] = ONE
    for a in rs.roots:
        mat[alg.root_index(img(a))][alg.root_index(a)] = Fraction(signs[a])
    return DiagramAutomorphism(alg=alg, node_perm=perm, order=order, matrix=mat, root_signs=signs)


# ---------------------------------------------------------------------------
# twisted affine data


@dataclass(frozen=True, eq=False)
class TwistedAffineData:
    """Restricted roots, eta, the labels b_i and the twisted Coxeter number."""

    sigma: DiagramAutomorphism
    restricted_roots: Tuple[Tuple[int, ...], ...]
    restricted_lengths: Dict[Tuple[int, ...], Fraction] = field(repr=False)
    eta: Tuple[int, ...]
    b: Tuple[int, ...]  # b_0 = 1 first
    coxeter_number: int

    @property
    def e(self) -> int:
        return self.sigma.order

    @property
    def rank(self) -> int:
        """Number of sigma-orbits on the simple roots."""
        return len(self.sigma.orbits)

    def restrict(self, a: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * self.rank
        for j, c in enumerate(a):
            out[self.sigma.orbit_of_node[j]] += c
        return tuple(out)

    def beta(self, i: int, x_pairings: Sequence) -> Fraction:
        """Value of the affine simple root beta_i at x, x given by beta_j(x), j >= 1."""
        if i == 0:
            return Fraction(1, self.e) - sum((bj * xj for bj, xj in zip(self.eta, x_pairings)), Fraction(0))
        return Fraction(x_pairings[i - 1])


def _orbit_average_norm(alg: ChevalleyAlgebra, sigma: DiagramAutomorphism, a: Root) -> Fraction:
    acc = [0] * len(a)
    cur = a
    for _ in range(sigma.order):
        acc = [x + y for x, y in zip(acc, cur)]
        cur = sigma.root_image(cur)
    return Fraction(alg.rs.norm(acc), sigma.order ** 2)


def twisted_affine_data(alg: ChevalleyAlgebra, sigma: DiagramAutomorphism) -> TwistedAffineData:
    rs = alg.rs
    e = sigma.order
    probe = TwistedAffineData(sigma=sigma, restricted_roots=(), restricted_lengths={},
                              eta=(), b=(), coxeter_number=0)
    lengths: Dict[Tuple[int, ...], Fraction] = {}
    for a in rs.roots:
        r = probe.restrict(a)
        lengths[r] = _orbit_average_norm(alg, sigma, a)
    restricted = tuple(sorted(lengths, key=lambda r: (-sum(r) if sum(r) < 0 else 0, sum(r), r)))
    positive = sorted((r for r in restricted if sum(r) > 0), key=lambda r: (sum(r), r))
    if e == 1:
        eta = rs.highest_root
    else:
        shortest = min(lengths[r] for r in positive)
        short = [r for r in positive if lengths[r] == shortest]
        top = max(short, key=lambda r: (sum(r), r))
        if rs.series == "A" and rs.rank % 2 == 0:
            eta = tuple(2 * x for x in top)
        else:
            eta = top
    b = (1,) + tuple(eta)
    return TwistedAffineData(sigma=sigma, restricted_roots=tuple(positive) + tuple(
        tuple(-x for x in r) for r in positive), restricted_lengths=lengths, eta=tuple(eta),
        b=b, coxeter_number=e * sum(b))


# ---------------------------------------------------------------------------
# Kac coordinates


@dataclass(frozen=True, eq=False)
class KacCoordinates:
    """theta = exp(x) * sigma with beta_i(x) = s_i / m."""

    sigma: DiagramAutomorphism
    affine: TwistedAffineData
    s: Tuple[int, ...]
    m: int
    x: Tuple[Fraction, ...]  # Cartan coordinates (coefficients of H_1..H_l)
    lambda_check: Tuple[Fraction, ...]  # m * x, Cartan coordinates
    lambda_pairings: Tuple[int, ...]  # <a_j, lambda_check> for the simple roots

    @property
    def alg(self) -> ChevalleyAlgebra:
        return self.sigma.alg

    @property
    def e(self) -> int:
        return self.sigma.order

    @property
    def s0(self) -> int:
        return self.s[0]

    def weight(self, a: Sequence[int]) -> int:
        """<a, lambda_check> for a root a (or any weight in root coordinates)."""
        return sum(c * p for c, p in zip(a, self.lambda_pairings))

    @property
    def x_pairings(self) -> Tuple[Fraction, ...]:
        """beta_i(x) for i = 1..l_sigma."""
        reps = [orb[0] for orb in self.sigma.orbits]
        return tuple(Fraction(self.lambda_pairings[j], self.m) for j in reps)

    def lambda_vector(self) -> list:
        return self.alg.cartan_vector(self.lambda_check)


def _solve_cartan(alg: ChevalleyAlgebra, pairings: Sequence[int]) -> Tuple[Fraction, ...]:
    # sum_i c_i cartan[i][j] = p_j
    n = alg.rank
    rows = [[Fraction(alg.rs.cartan[i][j]) for i in range(n)] + [Fraction(pairings[j])] for j in range(n)]
    from .linalg import rref
    red, piv = rref(rows)
    if len(piv) != n or piv[-1] >= n:
        raise ArithmeticError("Cartan matrix is singular")
    return tuple(r[n] for r in red)


def kac_coordinates(sigma: DiagramAutomorphism, s: Sequence[int],
                    affine: Optional[TwistedAffineData] = None) -> KacCoordinates:
    """Build theta from normalized Kac coordinates (not normalized by the tool)."""
    alg = sigma.alg
    if affine is None:
        affine = twisted_affine_data(alg, sigma)
    s = tuple(s)
    if len(s) != affine.rank + 1:
        raise GradingError(f"expected {affine.rank + 1} Kac coordinates for this sigma, got {len(s)}")
    if any((not isinstance(c, int)) or c < 0 for c in s):
        raise GradingError("Kac coordinates must be nonnegative integers")
    if not any(s):
        raise GradingError("Kac coordinates must not all vanish")
    if reduce(gcd, s) != 1:
        raise GradingError(f"Kac coordinates {s} are not normalized (common factor {reduce(gcd, s)})")
    e = sigma.order
    m = e * sum(bi * si for bi, si in zip(affine.b, s))
    pairings = tuple(s[1 + sigma.orbit_of_node[j]] for j in range(alg.rank))
    for a in alg.rs.roots:
        w = sum(c * p for c, p in zip(a, pairings))
        if not isinstance(w, int):
            raise GradingError("lambda_check is not integral on the root lattice")
    lam = _solve_cartan(alg, pairings)
    x = tuple(c / m for c in lam)
    kc = KacCoordinates(sigma=sigma, affine=affine, s=s, m=m, x=x, lambda_check=lam,
                        lambda_pairings=pairings)
    xp = kc.x_pairings
    for i in range(affine.rank + 1):
        if affine.beta(i, xp) != Fraction(s[i], m):
            raise ArithmeticError(f"beta_{i}(x) != s_{i}/m")
    return kc


def torsion_automorphism(kc: KacCoordinates) -> Matrix:
    """Matrix of theta = Ad(exp x) o sigma, entries in Q(zeta_m)."""
    alg = kc.alg
    sig = kc.sigma
    out = [row[:] for row in sig.matrix]
    for a in alg.rs.roots:
        col = alg.root_index(a)
        row = alg.root_index(sig.root_image(a))
        out[row][col] = sig.matrix[row][col] * zeta(kc.m, kc.weight(a))
    return out


# ---------------------------------------------------------------------------
# graded pieces


@dataclass(frozen=True, eq=False)
class GradedDecomposition:
    """The pieces g_i(k); only nonzero pieces are stored."""

    kc: KacCoordinates
    pieces: Dict[Tuple[int, int], Subspace] = field(repr=False)

    @property
    def alg(self) -> ChevalleyAlgebra:
        return self.kc.alg

    @property
    def m(self) -> int:
        return self.kc.m

    @property
    def e(self) -> int:
        return self.kc.e

    @property
    def s0(self) -> int:
        return self.kc.s0

    @property
    def sigma(self) -> DiagramAutomorphism:
        return self.kc.sigma

    @cached_property
    def theta(self) -> Matrix:
        return torsion_automorphism(self.kc)

    @cached_property
    def weights(self) -> Tuple[int, ...]:
        return tuple(sorted({k for (_, k) in self.pieces}))

    def piece(self, i: int, k: int) -> Subspace:
        return self.pieces.get((i % self.m, k), Subspace.zero(self.alg.dim))

    def g_i(self, i: int) -> Subspace:
        i %= self.m
        return _direct_sum(self.alg.dim, [v for (j, _), v in sorted(self.pieces.items()) if j == i])

    def g_k(self, k: int) -> Subspace:
        return _direct_sum(self.alg.dim, [v for (_, l), v in sorted(self.pieces.items()) if l == k])

    def g_k_sigma(self, k: int) -> Subspace:
        """The sigma-fixed part of g(k), which is g_{k mod m}(k)."""
        return self.piece(k, k)

    @cached_property
    def g_sigma(self) -> Subspace:
        return _direct_sum(self.alg.dim, [self.g_k_sigma(k) for k in self.weights])

    def dims(self) -> Dict[int, int]:
        return {i: self.g_i(i).dim for i in range(self.m)}

    def pieces_of(self, i: int) -> List[Tuple[int, Subspace]]:
        """Nonzero (k, g_i(k)) sorted by decreasing k."""
        i %= self.m
        return sorted(((k, v) for (j, k), v in self.pieces.items() if j == i), key=lambda t: -t[0])

    @cached_property
    def g1_basis(self) -> Tuple[Tuple[int, Tuple], ...]:
        """Basis of g_1 as (k, vector), grouped by decreasing k."""
        return tuple((k, vec) for k, sub in self.pieces_of(1) for vec in sub.basis)

    def g1_vector(self, coords: Sequence) -> list:
        basis = [v for _, v in self.g1_basis]
        if len(coords) != len(basis):
            raise NotInG1Error(f"expected {len(basis)} coordinates in the g_1 basis, got {len(coords)}")
        return lin_comb([Fraction(c) if isinstance(c, int) else c for c in coords], basis, self.alg.dim)

    def weight_part(self, x: Sequence, k: int) -> list:
        """Coordinate projection of x onto g(k)."""
        alg = self.alg
        out = [ZERO] * alg.dim
        for idx, c in enumerate(x):
            if c and self.kc.weight(alg.weight(idx)) == k:
                out[idx] = c
        return out

    def decompose_g1(self, x: Sequence) -> Dict[int, list]:
        """X = sum_k X_k with X_k in g_1(k); NotInG1Error if X is outside g_1."""
        if not self.in_g1(x):
            raise NotInG1Error("vector does not lie in g_1")
        out = {}
        for k in self.weights:
            part = self.weight_part(x, k)
            if any(part):
                out[k] = part
        return out

    def in_g1(self, x: Sequence) -> bool:
        if len(x) != self.alg.dim:
            return False
        return self.g_i(1).contains(x)

    def summary(self) -> dict:
        return {
            "m": self.m, "e": self.e, "s0": self.s0,
            "dim_g_i": {str(i): d for i, d in self.dims().items()},
            "dim_g_i_k": {f"{i},{k}": v.dim for (i, k), v in sorted(self.pieces.items())},
        }


def _direct_sum(n: int, subs: Sequence[Subspace]) -> Subspace:
    rows = [r for s in subs for r in s.basis]
    return Subspace(n, rows) if rows else Subspace.zero(n)


def _sigma_eigenspaces(sig: DiagramAutomorphism, indices: Sequence[int]) -> Dict[int, Subspace]:
    """Eigenspaces {r: ker(sigma - zeta_e^r)} of sigma on a sigma-stable coordinate subspace."""
    alg = sig.alg
    e = sig.order
    dim = alg.dim
    if e == 1:
        return {0: Subspace.coordinate(dim, indices)}
    powers = [identity(dim)]
    for _ in range(1, e):
        powers.append(matmul(sig.matrix, powers[-1]))
    out = {}
    for r in range(e):
        vecs = []
        for idx in indices:
            v = [ZERO] * dim
            for j in range(e):
                c = zeta(e, -r * j) / e
                for row in range(dim):
                    p = powers[j][row][idx]
                    if p:
                        v[row] = v[row] + c * p
            if any(v):
                vecs.append(v)
        if vecs:
            out[r] = Subspace(dim, vecs)
    return out


def grading_pieces(theta, kc: Optional[KacCoordinates] = None) -> GradedDecomposition:
    """Split g into the pieces g_i(k).

    Called as ``grading_pieces(theta, kc)`` or ``grading_pieces(kc)``.  The
    split itself uses lambda-weights and sigma-eigenspaces; theta only
    seeds the cache.
    """
    if isinstance(theta, KacCoordinates):
        theta, kc = None, theta
    if kc is None:
        raise TypeError("Kac coordinates are required")
    alg = kc.alg
    n = alg.rank
    by_weight: Dict[int, List[int]] = {0: list(range(n))}
    for a in alg.rs.roots:
        by_weight.setdefault(kc.weight(a), []).append(alg.root_index(a))
    step = kc.m // kc.e
    pieces: Dict[Tuple[int, int], Subspace] = {}
    for k in sorted(by_weight):
        for r, sub in _sigma_eigenspaces(kc.sigma, by_weight[k]).items():
            i = (k + r * step) % kc.m
            pieces[(i, k)] = sub
    gd = GradedDecomposition(kc=kc, pieces=pieces)
    if theta is not None:
        gd.__dict__["theta"] = theta
    return gd


def make_grading(alg: ChevalleyAlgebra, s: Sequence[int], node_perm: Optional[Sequence[int]] = None) -> GradedDecomposition:
    """Shortcut: sigma from a node permutation, then Kac coordinates, then pieces."""
    sig = pinned_automorphism(alg, node_perm)
    return grading_pieces(kac_coordinates(sig, s))


# ---------------------------------------------------------------------------
# regular, semisimple and stable vectors


def is_regular_semisimple(alg: ChevalleyAlgebra, x: Sequence) -> bool:
    """nullity(ad x) equals the rank and ker(ad x) = ker((ad x)^2)."""
    ad = adjoint_matrix(alg, x)
    r1 = rank(ad)
    if alg.dim - r1 != alg.rank:
        return False
    return rank(matmul(ad, ad)) == r1


def centralizer_in(alg: ChevalleyAlgebra, x: Sequence, sub: Subspace) -> Subspace:
    return sub.kernel_of(adjoint_matrix(alg, x))


def is_stable(grading: GradedDecomposition, x: Sequence) -> bool:
    """x in g_1 is stable iff it is regular semisimple with no centralizer in g_0."""
    if not grading.in_g1(x):
        raise NotInG1Error("stability is only defined for vectors of g_1")
    alg = grading.alg
    if not is_regular_semisimple(alg, x):
        return False
    return centralizer_in(alg, x, grading.g_i(0)).dim == 0


PREDICATES = ("any", "regular-semisimple", "stable")


def _check(grading: GradedDecomposition, predicate: str, x) -> bool:
    if predicate == "any":
        return any(x)
    if predicate in ("regular-semisimple", "rss"):
        return is_regular_semisimple(grading.alg, x)
    if predicate == "stable":
        return is_stable(grading, x)
    raise ValueError(f"unknown predicate {predicate!r}; choose from {PREDICATES}")


def sample_vector(grading: GradedDecomposition, predicate: str = "any", seed: int = 0,
                  budget: int = 1000, bound: int = 9) -> Tuple[list, List[int]]:
    """Random X in g_1 with integer coordinates in [-bound, bound] satisfying predicate.

    Returns (X, coordinates in the g_1 basis).  Deterministic for a fixed seed.
    """
    if predicate == "rss":
        predicate = "regular-semisimple"
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; choose from {PREDICATES}")
    rng = random.Random(seed)
    nb = len(grading.g1_basis)
    if nb == 0:
        raise SamplingExhausted("g_1 is zero")
    for _ in range(budget):
        coords = [rng.randint(-bound, bound) for _ in range(nb)]
        if not any(coords):
            continue
        x = grading.g1_vector(coords)
        if _check(grading, predicate, x):
            return x, coords
    raise SamplingExhausted(
        f"no {predicate} vector found in g_1 after {budget} tries (seed {seed})")
