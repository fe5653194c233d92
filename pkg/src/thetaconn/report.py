"""Report documents: exact JSON and an aligned text rendering.

Rationals are "p/q" strings, cyclotomic numbers use the power basis in
z<N>, vectors are maps from basis labels to nonzero coefficients.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .cyclotomic import CycScalar, format_scalar
from .gradings import GradedDecomposition

SCHEMA = 1


def exact(x: Any) -> Any:
    """Recursively turn numbers into exact strings (ints and bools stay)."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (Fraction, CycScalar)):
        return format_scalar(x)
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    if is_dataclass(x):
        return exact(asdict(x))
    raise TypeError(f"cannot serialize {type(x).__name__}")


def vector_doc(grading: GradedDecomposition, v: Sequence) -> Dict[str, str]:
    labels = grading.alg.basis_labels
    return {labels[i]: format_scalar(c) for i, c in enumerate(v) if c}


def grading_doc(grading: GradedDecomposition) -> dict:
    kc = grading.kc
    aff = kc.affine
    doc = grading.summary()
    doc.update({
        "type": grading.alg.label,
        "sigma": [p + 1 for p in grading.sigma.node_perm],
        "kac": list(kc.s),
        "eta": list(aff.eta),
        "b": list(aff.b),
        "twisted_coxeter_number": aff.coxeter_number,
        "lambda_check": exact(list(kc.lambda_check)),
        "lambda_pairings": list(kc.lambda_pairings),
        "g1_basis": [{"weight": k, "vector": vector_doc(grading, v)} for k, v in grading.g1_basis],
    })
    return doc


def local_doc(grading: GradedDecomposition, rep) -> dict:
    d = {
        "residue": vector_doc(grading, rep.residue),
        "residue_nilpotent": rep.residue_nilpotent,
        "residue_kernel_chain": list(rep.residue_kernel_chain),
        "predicted_orbit": exact(rep.predicted_orbit),
        "orbit_checks": exact(rep.orbit_checks),
        "slope": exact(rep.slope),
        "irregularity": exact(rep.irregularity),
        "euler_characteristic": rep.euler_characteristic,
        "h0_zero": rep.h0_zero,
        "h0_zero_direct": rep.h0_zero_direct,
        "h0_zero_stable_at_2N": rep.h0_zero_stable,
        "h0_infinity": rep.h0_infinity,
        "h0_global": rep.h0_global,
        "laurent_kernel": exact(rep.laurent),
        "negative_window": exact(rep.negative_window),
        "h1": rep.h1,
        "h1_exact_sequence": rep.h1_exact_sequence,
        "h1_formula_agrees": rep.formula_agrees,
        "rigid": rep.rigid,
        "stable": rep.stable,
        "regular_semisimple": rep.regular_semisimple,
        "s0_is_one": rep.s0_is_one,
        "euler_consistent": rep.euler_consistent,
        "truncation": rep.truncation,
    }
    return d


def connection_doc(grading: GradedDecomposition, terms) -> dict:
    """The form sum_j X_(k) t^j dt/t, one entry per nonzero term."""
    out = []
    for j, k, v in terms:
        out.append({"t_power": j, "weight": k, "coefficient": vector_doc(grading, v),
                    "display": _term_display(j, k)})
    return {"terms": out, "display": "d + " + " + ".join(t["display"] for t in out) if out else "d"}


def _term_display(j: int, k: int) -> str:
    name = f"X_{k}" if k >= 0 else f"X_({k})"
    if j == 0:
        return f"{name}/t dt"
    if j == 1:
        return f"{name} dt"
    return f"{name} t^{j - 1} dt"


def document(kind: str, job: dict, body: dict, seconds: float, checks: Optional[List[dict]] = None) -> dict:
    doc = {"schema": SCHEMA, "tool": "thetaconn", "version": __version__, "kind": kind, "job": job}
    doc.update(body)
    if checks is not None:
        doc["checks"] = checks
        doc["all_passed"] = all(c["passed"] for c in checks)
    doc["timing"] = {"seconds": f"{seconds:.3f}"}
    return doc


def strip_timing(doc: dict) -> dict:
    d = dict(doc)
    d.pop("timing", None)
    if "batch" in d:
        d["batch"] = [dict(item, report=strip_timing(item["report"])) if item.get("report") else item
                      for item in d["batch"]]
    return d


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# text


def _flatten(prefix: str, x, rows: list):
    if isinstance(x, dict):
        if not x:
            rows.append((prefix, "{}"))
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(x, list):
        rows.append((prefix, "(" + ", ".join(str(v) for v in x) + ")"))
    else:
        rows.append((prefix, "-" if x is None else str(x).lower() if isinstance(x, bool) else str(x)))


def to_text(doc: dict) -> str:
    rows: list = []
    for key, val in doc.items():
        if key == "checks":
            continue
        _flatten(key, val, rows)
    width = max(len(k) for k, _ in rows) if rows else 0
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    if "checks" in doc:
        lines.append("")
        nw = max((len(c["name"]) for c in doc["checks"]), default=0)
        for c in doc["checks"]:
            status = "pass" if c["passed"] else "FAIL"
            line = f"{c['name'].ljust(nw)}  {status}"
            if not c["passed"]:
                line += "  reproducer=" + json.dumps(c.get("reproducer", {}), sort_keys=True)
            lines.append(line)
    return "\n".join(lines) + "\n"
