"""The twisted loop algebra g[t, 1/t]^sigma with its Kac-Moy-Prasad grading.

Loop elements are finite maps from t-exponents to vectors of g.  The degree-i
KMP component is spanned by t^(e(i-k)/m) g_i(k), and p_1 = sum_k X_k
t^(e(1-k)/m) is the image of u*X.  Infinite objects only ever appear through
finite windows of degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cyclotomic import zeta
from .gradings import GradedDecomposition, NotInG1Error, is_regular_semisimple
from .linalg import ZERO, SparseEchelon, Subspace, lin_comb, matvec, to_row


class LoopError(ValueError):
    pass


@dataclass(frozen=True)
class LoopElement:
    """sum_n v_n t^n; ``terms`` never stores zero coefficients."""

    terms: Mapping[int, Tuple] = field(default_factory=dict)
    twisted: bool = True

    @classmethod
    def make(cls, terms: Mapping[int, Sequence], twisted: bool = True) -> "LoopElement":
        clean = {}
        for n, v in terms.items():
            if any(v):
                clean[int(n)] = tuple(v)
        return cls(terms=dict(sorted(clean.items())), twisted=twisted)

    @classmethod
    def monomial(cls, n: int, v: Sequence, twisted: bool = True) -> "LoopElement":
        return cls.make({n: v}, twisted)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(self.terms)

    def coefficient(self, n: int, dim: int) -> Tuple:
        return self.terms.get(n, (ZERO,) * dim)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _combine(self, other: "LoopElement", sign: int) -> "LoopElement":
        out = {n: list(v) for n, v in self.terms.items()}
        for n, w in other.terms.items():
            if n in out:
                out[n] = [a + sign * b for a, b in zip(out[n], w)]
            else:
                out[n] = [sign * b for b in w]
        return LoopElement.make(out, self.twisted and other.twisted)

    def __add__(self, other: "LoopElement") -> "LoopElement":
        return self._combine(other, 1)

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        return self._combine(other, -1)

    def __neg__(self) -> "LoopElement":
        return self.scale(-1)

    def scale(self, c) -> "LoopElement":
        return LoopElement.make({n: [c * a for a in v] for n, v in self.terms.items()}, self.twisted)

    def t_derivative(self) -> "LoopElement":
        """t d/dt."""
        return LoopElement.make({n: [n * a for a in v] for n, v in self.terms.items()}, self.twisted)

    def equivariant(self, grading: GradedDecomposition) -> bool:
        """sigma(v_n) = zeta_e^n v_n for every exponent n."""
        sig = grading.sigma
        for n, v in self.terms.items():
            z = zeta(sig.order, n)
            if any(a != z * b for a, b in zip(sig.apply(v), v)):
                return False
        return True


def loop_bracket(grading: GradedDecomposition, v: LoopElement, w: LoopElement) -> LoopElement:
    alg = grading.alg
    out: Dict[int, list] = {}
    for a, x in v.terms.items():
        for b, y in w.terms.items():
            z = alg.bracket(x, y)
            if any(z):
                acc = out.get(a + b)
                out[a + b] = z if acc is None else [p + q for p, q in zip(acc, z)]
    return LoopElement.make(out, v.twisted and w.twisted)


def invariant_form(grading: GradedDecomposition, v: LoopElement, w: LoopElement):
    """<v, w> = sum_n kappa(v_n, w_{-n})."""
    alg = grading.alg
    s = ZERO
    for n, x in v.terms.items():
        y = w.terms.get(-n)
        if y is not None:
            s = s + alg.killing_value(x, y)
    return s


def cocycle_pairing(grading: GradedDecomposition, z: LoopElement, zp: LoopElement):
    """<t d/dt z, z'>."""
    return invariant_form(grading, z.t_derivative(), zp)


def kmp_degree_operator(grading: GradedDecomposition, v: LoopElement) -> LoopElement:
    """D = (m/e) t d/dt + ad(lambda_check)."""
    kc = grading.kc
    alg = grading.alg
    f = Fraction(kc.m, kc.e)
    out = {}
    for n, x in v.terms.items():
        y = [f * n * a for a in x]
        for idx, a in enumerate(x):
            if a:
                y[idx] = y[idx] + kc.weight(alg.weight(idx)) * a
        out[n] = y
    return LoopElement.make(out, v.twisted)


# ---------------------------------------------------------------------------
# KMP components


def kmp_exponent(grading: GradedDecomposition, i: int, k: int) -> int:
    num = grading.e * (i - k)
    if num % grading.m:
        raise LoopError(f"e(i-k)/m is not an integer for i={i}, k={k}")
    return num // grading.m


@dataclass(frozen=True, eq=False)
class KMPComponent:
    """Degree-i piece of the KMP grading, basis ordered by decreasing k."""

    degree: int
    blocks: Tuple[Tuple[int, int, Subspace], ...]  # (k, exponent, g_i(k))
    basis: Tuple[LoopElement, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(j for _, j, sub in self.blocks for _ in range(sub.dim))

    @property
    def zero_exponent_weights(self) -> Tuple[int, ...]:
        """Weights k with exponent 0 (k = i); flagged separately from positive exponents."""
        return tuple(k for k, j, _ in self.blocks if j == 0)

    def coordinates(self, v: LoopElement) -> list:
        """Coordinates of v in ``basis``; LoopError if v is not in this component."""
        coords = []
        seen = set()
        for k, j, sub in self.blocks:
            seen.add(j)
            term = v.terms.get(j)
            if term is None:
                coords.extend([ZERO] * sub.dim)
                continue
            try:
                coords.extend(sub.coordinates(term))
            except ValueError:
                raise LoopError(f"t^{j} coefficient is outside the degree-{self.degree} component")
        if any(n not in seen for n in v.terms):
            raise LoopError(f"exponent outside the degree-{self.degree} component")
        return coords

    def element(self, coords: Sequence) -> LoopElement:
        acc: Dict[int, list] = {}
        pos = 0
        for k, j, sub in self.blocks:
            c = coords[pos:pos + sub.dim]
            pos += sub.dim
            if any(c):
                acc[j] = lin_comb(c, sub.basis, sub.ambient)
        return LoopElement.make(acc)

    def contains(self, v: LoopElement) -> bool:
        try:
            self.coordinates(v)
        except LoopError:
            return False
        return True


def kmp_component(grading: GradedDecomposition, i: int) -> KMPComponent:
    blocks = []
    basis = []
    for k, sub in grading.pieces_of(i):
        j = kmp_exponent(grading, i, k)
        blocks.append((k, j, sub))
        for b in sub.basis:
            basis.append(LoopElement.monomial(j, b))
    return KMPComponent(degree=i, blocks=tuple(blocks), basis=tuple(basis))


def phi_image(grading: GradedDecomposition, x: Sequence) -> LoopElement:
    """p_1 = sum_k X_k t^(e(1-k)/m)."""
    parts = grading.decompose_g1(x)
    return LoopElement.make({kmp_exponent(grading, 1, k): v for k, v in parts.items()})


# ---------------------------------------------------------------------------
# Heisenberg decomposition


@dataclass(frozen=True, eq=False)
class HeisenbergDecomp:
    """a_i = ker(ad p_1) and c_i = [p_1, component i-1] for |i| <= window."""

    window: int
    p1: LoopElement
    components: Dict[int, KMPComponent] = field(repr=False)
    a: Dict[int, Tuple[LoopElement, ...]] = field(repr=False)
    c: Dict[int, Tuple[LoopElement, ...]] = field(repr=False)

    def dims(self) -> Dict[int, Tuple[int, int, int]]:
        """degree -> (dim a_i, dim c_i, dim component)."""
        return {i: (len(self.a[i]), len(self.c[i]), self.components[i].dim) for i in sorted(self.a)}


def _ad_matrix(grading, p1: LoopElement, src: KMPComponent, dst: KMPComponent) -> List[list]:
    """Columns: coordinates in dst of [p1, b] for b in src.basis; returned as rows."""
    cols = [dst.coordinates(loop_bracket(grading, p1, b)) for b in src.basis]
    return [[col[r] for col in cols] for r in range(dst.dim)] if cols else [[] for _ in range(dst.dim)]


def heisenberg_decomposition(grading: GradedDecomposition, x: Sequence,
                             window: Optional[int] = None) -> HeisenbergDecomp:
    if window is None:
        window = 2 * grading.m
    if not grading.in_g1(x):
        raise NotInG1Error("X must lie in g_1")
    if not is_regular_semisimple(grading.alg, x):
        raise LoopError("the Heisenberg decomposition needs a regular semisimple X")
    p1 = phi_image(grading, x)
    comps = {i: kmp_component(grading, i) for i in range(-window - 1, window + 2)}
    a, c = {}, {}
    for i in range(-window, window + 1):
        src, dst = comps[i], comps[i + 1]
        mat = _ad_matrix(grading, p1, src, dst)
        ech = SparseEchelon(src.dim).extend(to_row(r) for r in mat)
        ker = []
        for vec in ech.kernel_basis():
            dense = [vec.get(j, ZERO) for j in range(src.dim)]
            ker.append(src.element(dense))
        a[i] = tuple(ker)
        prev = comps[i - 1]
        img = [loop_bracket(grading, p1, b) for b in prev.basis]
        coords = Subspace(src.dim, [src.coordinates(v) for v in img]) if img else Subspace.zero(src.dim)
        c[i] = tuple(src.element(list(r)) for r in coords.basis)
    return HeisenbergDecomp(window=window, p1=p1, components=comps, a=a, c=c)


def pairing_matrix(grading, left: Sequence[LoopElement], right: Sequence[LoopElement]) -> List[list]:
    return [[invariant_form(grading, u, v) for v in right] for u in left]
