"""Property suites: structural checks run by ``thetaconn verify`` and the tests.

Every check returns a :class:`CheckResult`; failures carry the inputs needed
to reproduce them (seed, vector coordinates).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from .connection import (analyze, build_connection, centralizer_sigma_dim, equivariance_holds,
                         h1_dimension, horizontal_sections_at_zero, irregularity_adjoint,
                         laurent_kernel, nilpotency_certificate, predicted_residue_orbit,
                         slope_at_infinity, verify_residue_orbit)
from .cyclotomic import zeta
from .gradings import (GradedDecomposition, SamplingExhausted, is_regular_semisimple, is_stable,
                       sample_vector)
from .liecore import ChevalleyAlgebra, adjoint_matrix
from .linalg import ZERO, Subspace, identity, mat_sub, matmul, matvec, rank
from .loopalg import (cocycle_pairing, heisenberg_decomposition, invariant_form, kmp_component,
                      kmp_degree_operator, loop_bracket, pairing_matrix, phi_image)

SUITES = ("core", "gradings", "loopalg", "connection", "all")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    reproducer: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if not self.passed:
            out["reproducer"] = self.reproducer or {}
        return out


def _result(name, passed, detail=None, reproducer=None) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail or {}, reproducer=reproducer)


# ---------------------------------------------------------------------------
# core


def jacobi_violations(alg: ChevalleyAlgebra, triples) -> List[tuple]:
    table = alg.table

    def br(i, vec):
        out = {}
        for j, c in vec.items():
            for k, v in table[i][j]:
                out[k] = out.get(k, 0) + c * v
        return out

    bad = []
    for a, b, c in triples:
        tot = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, v in br(x, dict(table[y][z])).items():
                tot[k] = tot.get(k, 0) + v
        if any(tot.values()):
            bad.append((a, b, c))
    return bad


def jacobi_triples(alg: ChevalleyAlgebra, seed: int = 0, samples: int = 1000):
    """All triples for rank <= 4 and G2; otherwise ``samples`` random ones."""
    d = alg.dim
    if alg.rank <= 4 or alg.label == "G2":
        return itertools.product(range(d), repeat=3), True
    rng = random.Random(seed)
    return [(rng.randrange(d), rng.randrange(d), rng.randrange(d)) for _ in range(samples)], False


def string_constant_violations(alg: ChevalleyAlgebra) -> List[tuple]:
    """|N_{a,b}| = p + 1, p the length of the a-string through b below b."""
    rs = alg.rs
    bad = []
    for (a, b), n in alg.N.items():
        p = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while rs.is_root(cur):
            p += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        if abs(n) != p + 1:
            bad.append((a, b, n, p))
    return bad


def _random_vector(rng, dim, bound=5):
    return [Fraction(rng.randint(-bound, bound)) for _ in range(dim)]


def core_suite(alg: ChevalleyAlgebra, seed: int = 0) -> List[CheckResult]:
    out = []
    triples, exhaustive = jacobi_triples(alg, seed)
    bad = jacobi_violations(alg, triples)
    out.append(_result("jacobi", not bad, {"exhaustive": exhaustive, "violations": len(bad)},
                       {"seed": seed, "triples": bad[:5]}))
    bad = string_constant_violations(alg)
    out.append(_result("structure_constants_root_strings", not bad, {"violations": len(bad)},
                       {"pairs": [list(map(list, p[:2])) for p in bad[:5]]}))
    rs = alg.rs
    roots = set(rs.roots)
    closed = all({rs.reflect(a, i) for a in rs.roots} == roots for i in range(rs.rank))
    out.append(_result("root_system_reflection_closure", closed))
    # Killing form against the trace of adjoint matrices
    ads = [adjoint_matrix(alg, alg.basis_vector(i)) for i in range(alg.dim)]
    kill = alg.killing
    idx = range(alg.dim) if alg.dim <= 52 else random.Random(seed).sample(range(alg.dim), 20)
    mism = []
    for i in idx:
        for j in idx:
            tr = sum((ads[i][r][c] * ads[j][c][r] for r in range(alg.dim) for c in range(alg.dim)
                      if ads[i][r][c] and ads[j][c][r]), ZERO)
            if tr != kill[i][j]:
                mism.append((i, j))
    out.append(_result("killing_is_trace_form", not mism, {"mismatches": len(mism)}, {"pairs": mism[:5]}))
    out.append(_result("killing_nondegenerate", rank(kill) == alg.dim))
    rng = random.Random(seed)
    bad = 0
    for _ in range(10):
        x, y, z = (_random_vector(rng, alg.dim) for _ in range(3))
        if alg.killing_value(alg.bracket(x, y), z) != alg.killing_value(x, alg.bracket(y, z)):
            bad += 1
    out.append(_result("killing_invariant", bad == 0, {"failures": bad}, {"seed": seed}))
    bad = 0
    for _ in range(10):
        x, y = _random_vector(rng, alg.dim), _random_vector(rng, alg.dim)
        ax, ay = adjoint_matrix(alg, x), adjoint_matrix(alg, y)
        comm = mat_sub(matmul(ax, ay), matmul(ay, ax))
        if comm != adjoint_matrix(alg, alg.bracket(x, y)):
            bad += 1
    out.append(_result("adjoint_is_homomorphism", bad == 0, {"failures": bad}, {"seed": seed}))
    return out


# ---------------------------------------------------------------------------
# gradings


def _matpow(m, k):
    acc = identity(len(m))
    for _ in range(k):
        acc = matmul(m, acc)
    return acc


def preserves_bracket(alg: ChevalleyAlgebra, mat, pairs=None) -> bool:
    cols = [[row[j] for row in mat] for j in range(alg.dim)]
    pairs = pairs if pairs is not None else itertools.product(range(alg.dim), repeat=2)
    for i, j in pairs:
        lhs = matvec(mat, alg.bracket(alg.basis_vector(i), alg.basis_vector(j)))
        if lhs != alg.bracket(cols[i], cols[j]):
            return False
    return True


def gradings_suite(grading: GradedDecomposition, seed: int = 0, samples: int = 5) -> List[CheckResult]:
    alg = grading.alg
    out = []
    sig = grading.sigma
    out.append(_result("sigma_order", _matpow(sig.matrix, sig.order) == identity(alg.dim), {"e": sig.order}))
    out.append(_result("sigma_preserves_bracket", preserves_bracket(alg, sig.matrix)))
    theta = grading.theta
    out.append(_result("theta_order", _matpow(theta, grading.m) == identity(alg.dim), {"m": grading.m}))
    out.append(_result("theta_preserves_bracket", preserves_bracket(alg, theta)))
    bad = []
    for (i, k), sub in grading.pieces.items():
        z = zeta(grading.m, i)
        for v in sub.basis:
            if matvec(theta, v) != [z * a for a in v]:
                bad.append((i, k))
                break
    out.append(_result("theta_eigenvalues", not bad, {"bad_pieces": bad}))
    total = sum(s.dim for s in grading.pieces.values())
    joined = Subspace(alg.dim, [v for s in grading.pieces.values() for v in s.basis])
    out.append(_result("grading_sum", total == alg.dim and joined.dim == alg.dim,
                       {"sum": total, "dim": alg.dim}))
    bad = []
    items = sorted(grading.pieces.items())
    for (i, k), s in items:
        for (j, l), t in items:
            target = grading.piece(i + j, k + l)
            for u in s.basis:
                for v in t.basis:
                    w = alg.bracket(u, v)
                    if any(w) and not target.contains(w):
                        bad.append(((i, k), (j, l)))
                        break
                else:
                    continue
                break
    out.append(_result("grading_law", not bad, {"violations": bad[:5]}))
    m, e, s0 = grading.m, grading.e, grading.s0
    lo, hi = -m + e * s0, m - e * s0
    bad = [(i, k) for (i, k) in grading.pieces
           if not (lo <= k <= hi) or (k - i) % (m // e)]
    out.append(_result("bidegree_bounds", not bad, {"bounds": [lo, hi], "violations": bad}))
    if s0 != 0:
        out.append(_result("g0_is_weight0_sigma_fixed", grading.g_i(0) == grading.g_k_sigma(0)))
    aff = grading.kc.affine
    eta_ok = all(x == y for x, y in zip(aff.eta, aff.b[1:])) and aff.coxeter_number == e * sum(aff.b)
    out.append(_result("twisted_affine_labels", eta_ok, {"eta": list(aff.eta), "h_sigma": aff.coxeter_number}))
    kc = grading.kc
    out.append(_result("kac_order_equation", m == e * sum(b * s for b, s in zip(aff.b, kc.s))))
    bad = []
    stable_seen = 0
    for sd in range(seed, seed + samples):
        try:
            x, coords = sample_vector(grading, "any", sd)
        except SamplingExhausted:  # g_1 = 0
            break
        if not is_stable(grading, x):
            continue
        stable_seen += 1
        # a stable vector is regular semisimple, so its centralizer is an abelian Cartan
        cent = Subspace.coordinate(alg.dim, range(alg.dim)).kernel_of(adjoint_matrix(alg, x))
        abelian = all(not any(alg.bracket(u, v)) for u in cent.basis for v in cent.basis)
        if not (is_regular_semisimple(alg, x) and cent.dim == alg.rank and abelian):
            bad.append({"seed": sd, "vector": [str(c) for c in coords]})
    out.append(_result("stable_implies_rss", not bad, {"samples": samples, "stable_samples": stable_seen},
                       bad[0] if bad else None))
    return out


# ---------------------------------------------------------------------------
# loop algebra


def _stable_or_rss(grading, seed):
    try:
        return sample_vector(grading, "stable", seed)
    except SamplingExhausted:
        return sample_vector(grading, "regular-semisimple", seed)


def loopalg_suite(grading: GradedDecomposition, seed: int = 0, window: Optional[int] = None,
                  x=None, coords=None) -> List[CheckResult]:
    out = []
    m = grading.m
    bad = [i for i in range(m) if kmp_component(grading, i).dim != grading.g_i(i).dim]
    out.append(_result("kmp_dimensions", not bad, {"degrees": bad}))
    neg, zero = [], []
    for i in range(1, m):
        comp = kmp_component(grading, i)
        if any(j < 0 for j in comp.exponents):
            neg.append(i)
        if comp.zero_exponent_weights:
            zero.append(i)
    out.append(_result("kmp_exponents_nonnegative", not neg, {"negative": neg, "zero_exponent_degrees": zero}))
    bad = []
    for i in range(-m, m + 1):
        for b in kmp_component(grading, i).basis:
            if kmp_degree_operator(grading, b) != b.scale(i):
                bad.append(i)
                break
    out.append(_result("degree_operator_eigenvalues", not bad, {"degrees": bad}))
    if x is None:
        try:
            x, coords = _stable_or_rss(grading, seed)
        except SamplingExhausted:
            out.append(_result("heisenberg", True, {"skipped": "no regular semisimple vector in g_1"}))
            return out
    rep = {"seed": seed, "vector": [str(c) for c in coords]}
    p1 = phi_image(grading, x)
    out.append(_result("p1_degree_one", kmp_degree_operator(grading, p1) == p1, {}, rep))
    bad = []
    for i in range(-m, m + 1):
        dst = kmp_component(grading, i + 1)
        for b in kmp_component(grading, i).basis:
            if not dst.contains(loop_bracket(grading, p1, b)):
                bad.append(i)
                break
    out.append(_result("ad_p1_raises_degree", not bad, {"degrees": bad}, rep))
    rng = random.Random(seed)
    comps = [kmp_component(grading, i) for i in range(-m, m + 1)]
    leib = 0
    for _ in range(5):
        cu, cv = rng.choice(comps), rng.choice(comps)
        u = cu.element(_random_vector(rng, cu.dim))
        v = cv.element(_random_vector(rng, cv.dim))
        lhs = kmp_degree_operator(grading, loop_bracket(grading, u, v))
        rhs = loop_bracket(grading, kmp_degree_operator(grading, u), v) + \
            loop_bracket(grading, u, kmp_degree_operator(grading, v))
        if lhs != rhs:
            leib += 1
    out.append(_result("degree_operator_derivation", leib == 0, {"failures": leib}, rep))
    out.extend(heisenberg_checks(grading, x, window, rep))
    return out


def heisenberg_checks(grading, x, window=None, rep=None) -> List[CheckResult]:
    h = heisenberg_decomposition(grading, x, window)
    w = h.window
    out = []
    comm = []
    ortho = []
    full = []
    cocycle = []
    split = []
    for i in range(-w, w + 1):
        for j in range(-w, w + 1):
            for u in h.a[i]:
                for v in h.a[j]:
                    if loop_bracket(grading, u, v):
                        comm.append((i, j))
            if i + j and any(invariant_form(grading, u, v) for u in h.a[i] for v in h.a[j]):
                ortho.append((i, j))
        pm = pairing_matrix(grading, h.a[i], h.a[-i])
        if len(h.a[i]) != len(h.a[-i]) or (pm and rank(pm) != len(h.a[i])):
            full.append(i)
        for z in h.a[i]:
            for zp in h.a[-i]:
                if cocycle_pairing(grading, z, zp) != Fraction(i * grading.e, grading.m) * invariant_form(grading, z, zp):
                    cocycle.append(i)
        comp = h.components[i]
        sa = Subspace(comp.dim, [comp.coordinates(v) for v in h.a[i]]) if h.a[i] else Subspace.zero(comp.dim)
        sc = Subspace(comp.dim, [comp.coordinates(v) for v in h.c[i]]) if h.c[i] else Subspace.zero(comp.dim)
        if sa.dim + sc.dim != comp.dim or sa.join(sc).dim != comp.dim:
            split.append(i)
        if any(invariant_form(grading, u, v) for u in h.a[i] for v in h.c[-i]):
            ortho.append((i, "c"))
    nonsplit = [i for i in range(-w, w + 1) if i and h.a[i] and not any(
        cocycle_pairing(grading, z, zp) for z in h.a[i] for zp in h.a[-i])]
    # the t d/dt image of a_n meets c_n trivially (evidence used for the vanishing at infinity)
    fg = []
    for i in range(-w, w + 1):
        comp = h.components[i]
        if not h.a[i]:
            continue
        ta = [v.t_derivative() for v in h.a[i]]
        if not all(comp.contains(v) for v in ta):
            fg.append(i)
            continue
        sa = Subspace(comp.dim, [comp.coordinates(v) for v in ta])
        sc = Subspace(comp.dim, [comp.coordinates(v) for v in h.c[i]]) if h.c[i] else Subspace.zero(comp.dim)
        if sa.intersect(sc).dim:
            fg.append(i)
    out.append(_result("heisenberg_abelian", not comm, {"window": w}, rep))
    out.append(_result("heisenberg_orthogonality", not ortho, {"violations": ortho[:5]}, rep))
    out.append(_result("heisenberg_pairing_full_rank", not full, {"degrees": full}, rep))
    out.append(_result("cocycle_identity", not cocycle, {"degrees": sorted(set(cocycle))}, rep))
    out.append(_result("cocycle_nonsplit", not nonsplit, {"degrees": nonsplit}, rep))
    out.append(_result("heisenberg_splitting", not split, {"degrees": split}, rep))
    out.append(_result("t_derivative_of_a_avoids_c", not fg, {"degrees": fg}, rep))
    dims = {str(i): len(h.a[i]) for i in range(-w, w + 1)}
    out.append(_result("heisenberg_scale_invariant", _scale_invariant(grading, x, h), {"dim_a": dims}, rep))
    return out


def _scale_invariant(grading, x, h) -> bool:
    h2 = heisenberg_decomposition(grading, [Fraction(-3, 2) * c for c in x], h.window)
    for i in h.a:
        comp = h.components[i]
        s1 = Subspace(comp.dim, [comp.coordinates(v) for v in h.a[i]]) if h.a[i] else Subspace.zero(comp.dim)
        s2 = Subspace(comp.dim, [comp.coordinates(v) for v in h2.a[i]]) if h2.a[i] else Subspace.zero(comp.dim)
        if s1 != s2:
            return False
    return True


# ---------------------------------------------------------------------------
# connection


def connection_suite(grading: GradedDecomposition, seed: int = 0, samples: int = 10,
                     truncation: Optional[int] = None) -> List[CheckResult]:
    out = []
    alg = grading.alg
    n = 4 * grading.m if truncation is None else truncation
    predicted = predicted_residue_orbit(grading, seed)
    failures: Dict[str, List[dict]] = {k: [] for k in (
        "equivariance", "residue_nilpotent", "euler_consistency", "h0_oracle", "h0_stabilization",
        "laurent_support", "negative_window_zero", "untwisted_rigidity", "scaling_invariance",
        "predicted_centralizer")}
    tested = {"rss": 0, "stable": 0}
    for sd in range(seed, seed + samples):
        try:
            x, coords = sample_vector(grading, "regular-semisimple", sd)
        except SamplingExhausted:
            break
        rep = {"seed": sd, "vector": [str(c) for c in coords]}
        tested["rss"] += 1
        conn = build_connection(grading, x)
        if not equivariance_holds(conn):
            failures["equivariance"].append(rep)
        if not nilpotency_certificate(alg, conn.part_at(0))["nilpotent"]:
            failures["residue_nilpotent"].append(rep)
        h0 = horizontal_sections_at_zero(conn, n)
        direct = centralizer_sigma_dim(conn)
        if h0.dim != direct:
            failures["h0_oracle"].append(rep)
        if horizontal_sections_at_zero(conn, 2 * n).dim != h0.dim:
            failures["h0_stabilization"].append(rep)
        irr = irregularity_adjoint(grading, x)
        if h1_dimension(grading, x) != irr - h0.dim:
            failures["euler_consistency"].append(rep)
        stable = is_stable(grading, x)
        if stable:
            tested["stable"] += 1
            if verify_residue_orbit(grading, x)["dim_centralizer_sigma"] != predicted["expected_centralizer_dim"]:
                failures["predicted_centralizer"].append(rep)
            if grading.s0 == 1:
                lk = laurent_kernel(conn, n)
                if not lk.nonnegative_support or lk.conclusive_dim != direct:
                    failures["laurent_support"].append(rep)
                neg = laurent_kernel(conn, n, negative_only=True)
                if neg.conclusive_dim or neg.extendable_dim:
                    failures["negative_window_zero"].append(rep)
                if h1_dimension(grading, x) != 0:
                    failures["untwisted_rigidity"].append(rep)
        y = [Fraction(-2, 3) * c for c in x]
        a = (verify_residue_orbit(grading, x), slope_at_infinity(grading, x), irr, h0.dim,
             h1_dimension(grading, x))
        b = (verify_residue_orbit(grading, y), slope_at_infinity(grading, y), irregularity_adjoint(grading, y),
             horizontal_sections_at_zero(build_connection(grading, y), n).dim, h1_dimension(grading, y))
        if a != b:
            failures["scaling_invariance"].append(rep)
    for name, bad in failures.items():
        out.append(_result(name, not bad, {"samples": dict(tested)}, bad[0] if bad else None))
    return out


def run_suite(grading: GradedDecomposition, suite: str, seed: int = 0,
              truncation: Optional[int] = None) -> List[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    out = []
    if suite in ("core", "all"):
        out += [_prefix("core", r) for r in core_suite(grading.alg, seed)]
    if suite in ("gradings", "all"):
        out += [_prefix("gradings", r) for r in gradings_suite(grading, seed)]
    if suite in ("loopalg", "all"):
        out += [_prefix("loopalg", r) for r in loopalg_suite(grading, seed)]
    if suite in ("connection", "all"):
        out += [_prefix("connection", r) for r in connection_suite(grading, seed, truncation=truncation)]
    return out


def _prefix(suite, r: CheckResult) -> CheckResult:
    r.name = f"{suite}.{r.name}"
    return r
