"""theta-connections d + p_1 dt/t in the adjoint representation and their invariants.

The one-form is sum_j A_j t^j dt/t with A_j = ad(X_k), j = e(1-k)/m.  Local
horizontal sections come from exact truncated linear systems.  h^1 is
given by the closed formula #R/m - dim g^{sigma,X_1} and recomputed from the
Euler characteristic and the local-global exact sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclotomic import zeta
from .gradings import (GradedDecomposition, NotInG1Error, _sigma_eigenspaces, is_regular_semisimple,
                       is_stable, sample_vector, SamplingExhausted)
from .liecore import adjoint_matrix
from .linalg import ZERO, Matrix, SparseEchelon, Subspace, identity, matmul, matvec, nullspace, rank
from .loopalg import kmp_exponent


class InvariantViolation(AssertionError):
    """A property guaranteed by the theory failed: a library bug, never a verdict."""


class HypothesisError(ValueError):
    """The input does not satisfy the hypothesis of the requested computation."""


# ---------------------------------------------------------------------------
# the connection


@dataclass(frozen=True, eq=False)
class ThetaConnection:
    grading: GradedDecomposition
    x: Tuple
    parts: Dict[int, Tuple] = field(repr=False)  # k -> X_k
    coefficients: Dict[int, Matrix] = field(repr=False)  # j -> A_j

    @property
    def dim(self) -> int:
        return self.grading.alg.dim

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coefficients))

    def part_at(self, j: int) -> Tuple:
        """X_k with e(1-k)/m = j (zero if absent)."""
        for k, v in self.parts.items():
            if kmp_exponent(self.grading, 1, k) == j:
                return v
        return (ZERO,) * self.dim

    @property
    def max_exponent(self) -> int:
        return max(self.coefficients) if self.coefficients else 0

    def form_terms(self) -> List[Tuple[int, int, Tuple]]:
        """(power of t in front of dt/t, weight k, X_k) sorted by power."""
        return sorted((kmp_exponent(self.grading, 1, k), k, v) for k, v in self.parts.items())


def _sigma_inverse(sig) -> Matrix:
    m = sig.matrix
    acc = identity(len(m))
    for _ in range(sig.order - 1):
        acc = matmul(m, acc)
    return acc


def equivariance_holds(conn: ThetaConnection) -> bool:
    """sigma A_j sigma^{-1} = zeta_e^j A_j, i.e. the form is invariant under t -> zeta_e^{-1} t plus sigma."""
    g = conn.grading
    sig = g.sigma
    if sig.order == 1:
        return True
    inv = _sigma_inverse(sig)
    for j, a in conn.coefficients.items():
        lhs = matmul(matmul(sig.matrix, a), inv)
        z = zeta(sig.order, j)
        if any(p != z * q for rp, rq in zip(lhs, a) for p, q in zip(rp, rq)):
            return False
    return True


def build_connection(grading: GradedDecomposition, x: Sequence) -> ThetaConnection:
    x = tuple(x)
    if not any(x):
        raise NotInG1Error("X must be nonzero")
    parts = grading.decompose_g1(x)
    alg = grading.alg
    coeffs = {}
    lo = -grading.m + grading.e * grading.s0
    for k, v in parts.items():
        if not (lo <= k <= 1):
            raise InvariantViolation(f"X has a component of weight {k} outside [{lo}, 1]")
        j = kmp_exponent(grading, 1, k)
        if j < 0:
            raise InvariantViolation("negative power of t in the connection form")
        coeffs[j] = adjoint_matrix(alg, v)
    conn = ThetaConnection(grading=grading, x=x, parts={k: tuple(v) for k, v in parts.items()},
                           coefficients=coeffs)
    if not equivariance_holds(conn):
        raise InvariantViolation("connection form is not sigma-equivariant")
    return conn


# ---------------------------------------------------------------------------
# residue and orbit evidence


def residue_at_zero(conn: ThetaConnection) -> Tuple:
    """X_1, the coefficient of dt/t; nilpotency is certified or InvariantViolation raised."""
    res = conn.part_at(0)
    if not nilpotency_certificate(conn.grading.alg, res)["nilpotent"]:
        raise InvariantViolation("residue is not nilpotent")
    return res


def nilpotency_certificate(alg, v: Sequence) -> dict:
    """Kernel chain dims of ad(v), ad(v)^2, ... until they stop growing."""
    ad = adjoint_matrix(alg, v)
    chain = []
    power = identity(alg.dim)
    while True:
        power = matmul(ad, power)
        k = alg.dim - rank(power)
        if chain and k == chain[-1]:
            break
        chain.append(k)
        if k == alg.dim:
            break
    return {"kernel_chain": chain, "nilpotent": chain[-1] == alg.dim, "nullity": chain[0]}


def predicted_residue_orbit(grading: GradedDecomposition, seed: int = 0) -> dict:
    """Labels (2 s_1, ..., 2 s_l) and the dimensions the prediction implies."""
    kc = grading.kc
    labels = tuple(2 * s for s in kc.s[1:])
    dim0 = grading.g_k_sigma(0).dim
    dim1 = grading.g_k_sigma(1).dim
    if all(l == 0 for l in labels):
        name = "zero"
    elif all(l == 2 for l in labels) and kc.e == 1:
        name = "regular"
    elif grading.alg.label == "G2" and labels == (2, 0) and kc.e == 1:
        name = "G2(2)"
    else:
        name = None
    try:
        sample_vector(grading, "stable", seed=seed)
        verified = True
    except SamplingExhausted:
        verified = False
    return {"labels": labels, "name": name, "expected_centralizer_dim": dim0,
            "distinguished": dim0 == dim1, "stable_vector_found": verified}


def verify_residue_orbit(grading: GradedDecomposition, x: Sequence) -> dict:
    alg = grading.alg
    x1 = grading.decompose_g1(x).get(1, [ZERO] * alg.dim)
    ad = adjoint_matrix(alg, x1)
    cent = grading.g_sigma.kernel_of(ad).dim
    dim0 = grading.g_k_sigma(0).dim
    orbit = grading.g_i(0).image(ad).dim
    dim1 = grading.g_k_sigma(1).dim
    return {
        "dim_centralizer_sigma": cent,
        "dim_g0_sigma_weight0": dim0,
        "dim_orbit_tangent": orbit,
        "dim_g1_sigma_weight1": dim1,
        "centralizer_matches": cent == dim0,
        "orbit_open_dense": orbit == dim1,
    }


# ---------------------------------------------------------------------------
# infinity


def is_semisimple(alg, x: Sequence) -> bool:
    """ad(x) has squarefree minimal polynomial (ker chain shortcut for rss)."""
    if is_regular_semisimple(alg, x):
        return True
    ad = adjoint_matrix(alg, x)
    n = alg.dim
    # Krylov minimal polynomial via successive powers, then squarefreeness
    powers = [identity(n)]
    ech = SparseEchelon()
    flat = lambda m: {i * n + j: v for i, row in enumerate(m) for j, v in enumerate(row) if v}
    basis_rows = []
    while True:
        row = flat(powers[-1])
        red = ech.reduce(row)
        if not red:
            break
        ech.add(row)
        basis_rows.append(row)
        powers.append(matmul(ad, powers[-1]))
    deg = len(powers) - 1
    # solve ad^deg = sum c_i ad^i
    cols = [flat(p) for p in powers[:deg]]
    target = flat(powers[deg])
    keys = sorted(set().union(*cols, target))
    sys_rows = [[c.get(kk, ZERO) for c in cols] + [-target.get(kk, ZERO)] for kk in keys]
    ker = nullspace(sys_rows, deg + 1)
    sol = next(v for v in ker if v[-1])
    poly = [c / sol[-1] for c in sol[:-1]] + [Fraction(1)]  # monic, low -> high
    return _squarefree(poly)


def _squarefree(poly: List) -> bool:
    from .cyclotomic import _poly_divmod, _poly_trim
    deriv = _poly_trim([k * c for k, c in enumerate(poly)][1:])
    a, b = _poly_trim(list(poly)), deriv
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return len(a) == 1


def slope_at_infinity(grading: GradedDecomposition, x: Sequence) -> Optional[Fraction]:
    """e/m, or None when X is not semisimple."""
    if not grading.in_g1(x):
        raise NotInG1Error("X must lie in g_1")
    if not any(x):
        raise NotInG1Error("X must be nonzero")
    if not is_semisimple(grading.alg, x):
        return None
    return Fraction(grading.e, grading.m)


def gauge_at_infinity(grading: GradedDecomposition, x: Sequence) -> dict:
    """Normal form d - (m/e) X da/a^2 + lambda_check da/a after t = a^(-m/e) and the lambda gauge."""
    if not grading.in_g1(x):
        raise NotInG1Error("X must lie in g_1")
    f = Fraction(grading.m, grading.e)
    return {"order": f,
            "leading": tuple(-f * c for c in x),
            "residual": tuple(grading.kc.lambda_vector())}


def irregularity_adjoint(grading: GradedDecomposition, x: Sequence) -> Optional[Fraction]:
    """(dim g - dim g^X)/m, or None if X is not semisimple."""
    alg = grading.alg
    if not is_semisimple(alg, x):
        return None
    cent = alg.dim - rank(adjoint_matrix(alg, x))
    return Fraction(alg.dim - cent, grading.m)


def euler_characteristic(grading: GradedDecomposition, x: Sequence) -> Optional[int]:
    irr = irregularity_adjoint(grading, x)
    if irr is None:
        return None
    if irr.denominator != 1:
        raise InvariantViolation(f"irregularity {irr} is not an integer")
    return -int(irr)


# ---------------------------------------------------------------------------
# truncated solution spaces


class _Block:
    """Unknown layout: for each degree n, a basis of the zeta_e^n eigenspace of sigma."""

    def __init__(self, conn: ThetaConnection, degrees: Sequence[int]):
        g = conn.grading
        alg = g.alg
        e = g.e
        eig = _sigma_eigenspaces(g.sigma, range(alg.dim))
        self.eig = {r: eig.get(r, Subspace.zero(alg.dim)).basis for r in range(e)}
        self.degrees = sorted(degrees, reverse=True)  # highest degree first keeps rows banded
        self.offset = {}
        pos = 0
        for n in self.degrees:
            self.offset[n] = pos
            pos += len(self.eig[n % e])
        self.ncols = pos
        self.conn = conn
        self.e = e
        # images A_j u for each eigenvector u
        self.images = {}
        for r in range(e):
            for b, u in enumerate(self.eig[r]):
                for j, a in conn.coefficients.items():
                    self.images[(r, b, j)] = matvec(a, u)

    def columns(self, n: int) -> range:
        o = self.offset[n]
        return range(o, o + len(self.eig[n % self.e]))

    def equation_rows(self, d: int) -> List[dict]:
        """Rows of d v_d + sum_j A_j v_{d-j} = 0 (one per coordinate of g)."""
        dim = self.conn.dim
        rows = [dict() for _ in range(dim)]
        js = set(self.conn.coefficients) | {0}
        for j in js:
            n = d - j
            if n not in self.offset:
                continue
            r = n % self.e
            o = self.offset[n]
            for b, u in enumerate(self.eig[r]):
                col = o + b
                vec = self.images.get((r, b, j))
                for i in range(dim):
                    c = ZERO
                    if vec is not None and vec[i]:
                        c = vec[i]
                    if j == 0 and u[i]:
                        c = c + n * u[i]
                    if c:
                        rows[i][col] = rows[i].get(col, ZERO) + c
        return [r for r in rows if r]

    def series(self, vec: dict) -> Dict[int, list]:
        out = {}
        for n in self.degrees:
            r = n % self.e
            coeffs = [vec.get(c, ZERO) for c in self.columns(n)]
            if any(coeffs):
                basis = self.eig[r]
                acc = [ZERO] * self.conn.dim
                for c, u in zip(coeffs, basis):
                    if c:
                        acc = [p + c * q for p, q in zip(acc, u)]
                out[n] = acc
        return out


def _solve(block: _Block, eq_degrees: Sequence[int]) -> SparseEchelon:
    ech = SparseEchelon(block.ncols)
    for d in sorted(eq_degrees, reverse=True):
        for row in block.equation_rows(d):
            ech.add(row)
    return ech


@dataclass(frozen=True)
class SeriesSolutions:
    truncation: int
    dim: int
    basis: Tuple[Dict[int, list], ...] = field(repr=False)


def horizontal_sections_at_zero(conn: ThetaConnection, truncation: Optional[int] = None) -> SeriesSolutions:
    """Solutions in g[[t]]^sigma modulo t^(N+1)."""
    n = 4 * conn.grading.m if truncation is None else truncation
    if n < 1:
        raise ValueError("truncation must be at least 1")
    block = _Block(conn, range(0, n + 1))
    ech = _solve(block, range(0, n + 1))
    basis = tuple(block.series(v) for v in ech.kernel_basis())
    return SeriesSolutions(truncation=n, dim=len(basis), basis=basis)


def centralizer_sigma_dim(conn: ThetaConnection) -> int:
    """dim(ker ad X_1 on g^sigma), by direct linear algebra."""
    g = conn.grading
    x1 = conn.part_at(0)
    return g.g_sigma.kernel_of(adjoint_matrix(g.alg, x1)).dim


@dataclass(frozen=True)
class LaurentKernel:
    window: Tuple[int, int]
    band: int
    raw_dim: int
    conclusive_dim: int
    inconclusive_dim: int
    min_conclusive_degree: Optional[int]
    conclusive: Tuple[Dict[int, list], ...] = field(repr=False)
    extendable_dim: Optional[int] = None  # negative window only

    @property
    def nonnegative_support(self) -> bool:
        return self.min_conclusive_degree is None or self.min_conclusive_degree >= 0


def _kernel_with_bottom_zero(block: _Block, ech: SparseEchelon, bottom: Sequence[int]) -> List[dict]:
    cut = SparseEchelon(block.ncols)
    cut.pivots = {c: dict(r) for c, r in ech.pivots.items()}
    for n in bottom:
        for col in block.columns(n):
            cut.add({col: 1})
    return cut.kernel_basis()


def laurent_kernel(conn: ThetaConnection, window: Optional[int] = None, negative_only: bool = False) -> LaurentKernel:
    """Kernel of the connection on sigma-equivariant Laurent polynomials in a window.

    Equations are imposed only where every term lies in the window.  The
    lowest ``band`` degrees get no equation of their own, so kernel vectors
    touching them are inconclusive; the rest are reported as conclusive.
    With ``negative_only`` the window is [-N, -1] (series in 1/t) and the
    equations run up to degree band - 1, where the missing nonnegative
    terms vanish.
    """
    nwin = 4 * conn.grading.m if window is None else window
    band = conn.max_exponent
    if negative_only:
        lo, hi = -nwin, -1
        eqs = range(lo + band, hi + band + 1)
    else:
        lo, hi = -nwin, nwin
        eqs = range(lo + band, hi + 1)
    block = _Block(conn, range(lo, hi + 1))
    ech = _solve(block, eqs)
    raw = block.ncols - ech.rank
    bottom = list(range(lo, lo + band))
    concl = _kernel_with_bottom_zero(block, ech, bottom)
    series = tuple(block.series(v) for v in concl)
    degs = [n for s in series for n in s]
    ext = None
    if negative_only:
        ext = _extendable_dim(conn, nwin)
    return LaurentKernel(window=(lo, hi), band=band, raw_dim=raw, conclusive_dim=len(series),
                         inconclusive_dim=raw - len(series),
                         min_conclusive_degree=min(degs) if degs else None,
                         conclusive=series, extendable_dim=ext)


def _extendable_dim(conn: ThetaConnection, nwin: int, top: int = -1) -> int:
    """dim of the restriction to [-N, top] of the truncated kernel on [-2N, top].

    Series in 1/t are bounded above, so equations are imposed up to degree
    top + band; the deep window absorbs the artifacts of the lower cut.
    """
    band = conn.max_exponent
    lo = -2 * nwin
    block = _Block(conn, range(lo, top + 1))
    ech = _solve(block, range(lo + band, top + band + 1))
    ker = [block.series(v) for v in ech.kernel_basis()]
    rows = []
    for s in ker:
        row = []
        for n in range(-nwin, top + 1):
            row.extend(s.get(n, [ZERO] * conn.dim))
        rows.append(row)
    return rank(rows) if rows else 0


def sections_at_infinity(conn: ThetaConnection, window: Optional[int] = None) -> int:
    """Truncated dim of horizontal sections in g((1/t))^sigma, degrees up to N."""
    nwin = 4 * conn.grading.m if window is None else window
    return _extendable_dim(conn, nwin, top=nwin)


def global_sections(conn: ThetaConnection, window: Optional[int] = None) -> int:
    """Horizontal Laurent polynomials supported in [-N, N] (all equations imposed)."""
    nwin = 4 * conn.grading.m if window is None else window
    block = _Block(conn, range(-nwin, nwin + 1))
    ech = _solve(block, range(-nwin, nwin + conn.max_exponent + 1))
    return block.ncols - ech.rank


# ---------------------------------------------------------------------------
# global invariants


def _num_roots_over_m(grading: GradedDecomposition) -> int:
    nr = grading.alg.rs.num_roots
    if nr % grading.m:
        raise InvariantViolation(f"#R/m = {nr}/{grading.m} is not an integer")
    return nr // grading.m


def h1_dimension(grading: GradedDecomposition, x: Sequence) -> int:
    """The closed formula #R/m - dim g^{sigma, X_1}; requires X regular semisimple.

    The formula presumes that there are no horizontal sections at infinity;
    :func:`cohomology_dimensions` recomputes h^1 without that presumption.
    """
    if not grading.in_g1(x):
        raise NotInG1Error("X must lie in g_1")
    if not is_regular_semisimple(grading.alg, x):
        raise HypothesisError("h1 formula requires a regular semisimple X")
    conn = build_connection(grading, x)
    return _num_roots_over_m(grading) - centralizer_sigma_dim(conn)


def cohomology_dimensions(grading: GradedDecomposition, x: Sequence,
                          truncation: Optional[int] = None) -> Optional[dict]:
    """h^0, h^1, h^2 of the intermediate extension from truncated local data.

    chi_c = -Irr, h^2 = h^0 = dim of global sections (the adjoint
    connection is self-dual), and the local-global exact sequence gives
    h^1 = Irr + 2 h^0 - h^0(0) - h^0(infinity).  None if X is not semisimple.
    """
    irr = irregularity_adjoint(grading, x)
    if irr is None:
        return None
    conn = build_connection(grading, x)
    n = 4 * grading.m if truncation is None else truncation
    h0z = horizontal_sections_at_zero(conn, n).dim
    h0i = sections_at_infinity(conn, n)
    h0g = global_sections(conn, n)
    if irr.denominator != 1:
        raise InvariantViolation(f"irregularity {irr} is not an integer")
    h1 = int(irr) + 2 * h0g - h0z - h0i
    return {"h0": h0g, "h1": h1, "h2": h0g, "h0_zero": h0z, "h0_infinity": h0i,
            "irregularity": irr, "truncation": n}


def is_cohomologically_rigid(grading: GradedDecomposition, x: Sequence,
                             truncation: Optional[int] = None) -> dict:
    """Rigidity verdict; rigid is None when the h1 formula does not apply.

    rigid means the closed formula gives h^1 = 0 and no global horizontal
    sections exist (so h^0 = h^2 = 0 as well).
    """
    if not grading.in_g1(x):
        raise NotInG1Error("X must lie in g_1")
    rss = is_regular_semisimple(grading.alg, x)
    stable = is_stable(grading, x)
    s0_one = grading.s0 == 1
    h1 = h1_dimension(grading, x) if rss else None
    coh = cohomology_dimensions(grading, x, truncation) if rss else None
    rigid = None if h1 is None else (h1 == 0 and coh["h0"] == 0)
    if stable and s0_one and not rigid:
        raise InvariantViolation("stable X with s0 = 1 gave a non-rigid connection")
    return {"rigid": rigid, "h1": h1, "stable": stable, "s0_is_one": s0_one, "regular_semisimple": rss,
            "cohomology": coh, "formula_agrees": None if coh is None else coh["h1"] == h1}


@dataclass(frozen=True)
class LocalReport:
    residue: Tuple
    residue_nilpotent: bool
    residue_kernel_chain: Tuple[int, ...]
    predicted_orbit: dict
    orbit_checks: dict
    slope: Optional[Fraction]
    irregularity: Optional[Fraction]
    euler_characteristic: Optional[int]
    h0_zero: int
    h0_zero_direct: int
    h0_zero_stable: bool
    h0_infinity: int
    h0_global: int
    laurent: dict
    negative_window: dict
    h1: Optional[int]
    h1_exact_sequence: Optional[int]
    formula_agrees: Optional[bool]
    rigid: Optional[bool]
    stable: bool
    regular_semisimple: bool
    s0_is_one: bool
    euler_consistent: Optional[bool]
    truncation: int
    connection_terms: Tuple[Tuple[int, int, Tuple], ...] = field(repr=False, default=())


def analyze(grading: GradedDecomposition, x: Sequence, truncation: Optional[int] = None,
            seed: int = 0) -> LocalReport:
    """build -> residue -> slope -> irregularity -> h0/h1 -> rigidity."""
    n = 4 * grading.m if truncation is None else truncation
    conn = build_connection(grading, x)
    res = residue_at_zero(conn)
    cert = nilpotency_certificate(grading.alg, res)
    h0 = horizontal_sections_at_zero(conn, n)
    h0_again = horizontal_sections_at_zero(conn, 2 * n)
    direct = centralizer_sigma_dim(conn)
    lk = laurent_kernel(conn, n)
    neg = laurent_kernel(conn, n, negative_only=True)
    rig = is_cohomologically_rigid(grading, x, n)
    irr = irregularity_adjoint(grading, x)
    coh = rig["cohomology"]
    consistent = None
    if rig["h1"] is not None and irr is not None:
        consistent = rig["h1"] == irr - h0.dim
    return LocalReport(
        residue=tuple(res), residue_nilpotent=cert["nilpotent"], residue_kernel_chain=tuple(cert["kernel_chain"]),
        predicted_orbit=predicted_residue_orbit(grading, seed), orbit_checks=verify_residue_orbit(grading, x),
        slope=slope_at_infinity(grading, x), irregularity=irr, euler_characteristic=euler_characteristic(grading, x),
        h0_zero=h0.dim, h0_zero_direct=direct, h0_zero_stable=h0.dim == h0_again.dim,
        h0_infinity=sections_at_infinity(conn, n) if coh is None else coh["h0_infinity"],
        h0_global=global_sections(conn, n) if coh is None else coh["h0"],
        laurent={"window": list(lk.window), "band": lk.band, "raw": lk.raw_dim, "conclusive": lk.conclusive_dim,
                 "inconclusive": lk.inconclusive_dim, "min_conclusive_degree": lk.min_conclusive_degree,
                 "nonnegative_support": lk.nonnegative_support},
        negative_window={"window": list(neg.window), "raw": neg.raw_dim, "conclusive": neg.conclusive_dim,
                         "extendable": neg.extendable_dim},
        h1=rig["h1"], h1_exact_sequence=None if coh is None else coh["h1"], formula_agrees=rig["formula_agrees"],
        rigid=rig["rigid"], stable=rig["stable"], regular_semisimple=rig["regular_semisimple"],
        s0_is_one=rig["s0_is_one"], euler_consistent=consistent, truncation=n,
        connection_terms=tuple(conn.form_terms()))
