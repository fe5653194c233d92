"""Command-line interface: ``thetaconn analyze | verify | examples | list``.

Exit codes: 0 ok, 1 property failure, 2 bad input, 3 internal invariant
violation.  An analysis verdict (for instance "not rigid") is never an error.
"""

from __future__ import annotations

import argparse
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from .checks import SUITES, run_suite
from .connection import HypothesisError, InvariantViolation, analyze, gauge_at_infinity
from .gradings import GradingError, NotInG1Error, SamplingExhausted, sample_vector
from .jobspec import (LISTED, JobSpec, SpecError, example_spec, parse_config, parse_sigma,
                      parse_int_list, parse_vector)
from .liecore import InvalidTypeError
from .loopalg import LoopError
from .report import (connection_doc, document, exact, grading_doc, local_doc, to_json, to_text,
                     vector_doc)

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

INPUT_ERRORS = (SpecError, GradingError, NotInG1Error, InvalidTypeError, HypothesisError,
                SamplingExhausted, LoopError)


# ---------------------------------------------------------------------------
# commands (pure: return (exit code, document))


def resolve_vector(spec: JobSpec, grading) -> Tuple[list, List[Fraction], dict]:
    if spec.vector is not None:
        coords = list(spec.vector)
        x = grading.g1_vector(coords)
        source = {"source": "explicit"}
    else:
        x, coords = sample_vector(grading, spec.sample, spec.seed)
        source = {"source": "sampled", "predicate": spec.sample, "seed": spec.seed}
    source["coordinates"] = exact([Fraction(c) for c in coords])
    source["vector"] = vector_doc(grading, x)
    return x, coords, source


def cmd_analyze(spec: JobSpec) -> Tuple[int, dict]:
    t0 = time.perf_counter()
    grading = spec.grading()
    x, _, vdoc = resolve_vector(spec, grading)
    rep = analyze(grading, x, spec.truncation, seed=spec.seed)
    gauge = gauge_at_infinity(grading, x)
    body = {
        "grading": grading_doc(grading),
        "vector": vdoc,
        "connection": connection_doc(grading, rep.connection_terms),
        "local": local_doc(grading, rep),
        "gauge_at_infinity": {"order": exact(gauge["order"]),
                              "leading": vector_doc(grading, gauge["leading"]),
                              "residual": vector_doc(grading, gauge["residual"])},
    }
    return EXIT_OK, document("analyze", spec.to_dict(), body, time.perf_counter() - t0)


def cmd_verify(spec: JobSpec, suite: str = "all") -> Tuple[int, dict]:
    if suite not in SUITES:
        raise SpecError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    grading = spec.grading()
    results = run_suite(grading, suite, seed=spec.seed, truncation=spec.truncation)
    checks = [exact(r.to_dict()) for r in results]
    for c, r in zip(checks, results):
        if not r.passed:
            c.setdefault("reproducer", {}).update({"job": spec.to_dict(), "suite": suite})
    body = {"suite": suite, "grading": grading_doc(grading)}
    doc = document("verify", spec.to_dict(), body, time.perf_counter() - t0, checks)
    return (EXIT_OK if doc["all_passed"] else EXIT_PROPERTY), doc


def cmd_examples(name: str, fmt: str = "json") -> Tuple[int, dict]:
    spec = example_spec(name)
    code, doc = cmd_analyze(spec.__class__(**{**spec.__dict__, "format": fmt}))
    doc["kind"] = "example"
    doc["example"] = name
    return code, doc


def list_rows() -> List[dict]:
    rows = []
    for name in LISTED:
        spec = example_spec(name)
        g = spec.grading()
        try:
            sample_vector(g, "stable", 0)
            stable = True
        except SamplingExhausted:
            stable = False
        rows.append({"name": name, "type": spec.type, "sigma_order": g.e, "kac": list(spec.kac),
                     "m": g.m, "stable": stable})
    return rows


def cmd_list() -> Tuple[int, dict]:
    t0 = time.perf_counter()
    return EXIT_OK, document("list", {}, {"gradings": list_rows()}, time.perf_counter() - t0)


def list_text(rows: List[dict]) -> str:
    head = ("name", "type", "e", "kac", "m", "stable")
    table = [head] + [(r["name"], r["type"], str(r["sigma_order"]), ",".join(map(str, r["kac"])),
                       str(r["m"]), "yes" if r["stable"] else "no") for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in table) + "\n"


# ---------------------------------------------------------------------------
# batch


def _job_worker(args) -> Tuple[str, int, Optional[dict], Optional[str]]:
    name, text, kind, suite = args
    try:
        spec = JobSpec.from_config(text)
        if kind == "verify":
            code, doc = cmd_verify(spec, suite)
        else:
            code, doc = cmd_analyze(spec)
        return name, code, doc, None
    except INPUT_ERRORS as exc:
        return name, EXIT_INPUT, None, str(exc)
    except Exception as exc:  # noqa: BLE001 - reported per job as an internal error
        return name, EXIT_INTERNAL, None, f"{type(exc).__name__}: {exc}"


def run_batch(directory: Path, kind: str = "analyze", suite: str = "all", jobs: int = 1) -> Tuple[int, dict]:
    if not directory.is_dir():
        raise SpecError(f"{directory} is not a directory")
    t0 = time.perf_counter()
    files = sorted(p for p in directory.iterdir() if p.is_file() and not p.name.startswith("."))
    work = [(p.name, p.read_text(), kind, suite) for p in files]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_job_worker, work))
    else:
        results = [_job_worker(w) for w in work]
    results.sort(key=lambda r: r[0])
    items = []
    code = EXIT_OK
    for name, c, doc, err in results:
        item = {"name": name, "exit_code": c}
        if doc is not None:
            item["report"] = doc
        if err is not None:
            item["error"] = err
        items.append(item)
        code = max(code, c)
    return code, document("batch", {"directory": str(directory), "command": kind},
                          {"batch": items}, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# argument handling


def _add_job_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key=value job file; flags override its entries")
    p.add_argument("--type", help="algebra type, e.g. G2, or a series letter with --rank")
    p.add_argument("--rank", type=int)
    p.add_argument("--sigma", help="1-based node permutation (e.g. 2,1) or 'id'")
    p.add_argument("--kac", help="Kac coordinates s0,...,s_l")
    vec = p.add_mutually_exclusive_group()
    vec.add_argument("--vector", help="coordinates of X in the g_1 basis (p/q allowed)")
    vec.add_argument("--sample", choices=("any", "regular-semisimple", "stable"))
    p.add_argument("--seed", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--batch", type=Path, help="directory of job files (one report per file)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    _add_output_flags(p)


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--out", type=Path)


def spec_from_args(args) -> JobSpec:
    d = parse_config(args.config.read_text()) if args.config else {}
    if args.type is not None:
        d["type"] = args.type
        d.pop("series", None)
        if args.rank is None and any(ch.isdigit() for ch in args.type):
            d.pop("rank", None)
    if args.rank is not None:
        d["rank"] = str(args.rank)
        if "type" in d:
            d["type"] = "".join(ch for ch in d["type"] if not ch.isdigit())
    for key in ("sigma", "kac", "truncation", "format"):
        val = getattr(args, key)
        if val is not None:
            d[key] = str(val)
    if args.vector is not None:
        d["vector"] = args.vector
        d.pop("sample", None)
    if args.sample is not None:
        d["sample"] = args.sample
        d.pop("vector", None)
    if args.seed is not None:
        d["seed"] = str(args.seed)
    return JobSpec.from_mapping(d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetaconn",
                                     description="Gradings from Kac coordinates and their theta-connections.")
    sub = parser.add_subparsers(dest="command", required=True)
    pa = sub.add_parser("analyze", help="build the connection for one job and compute its invariants")
    _add_job_flags(pa)
    pv = sub.add_parser("verify", help="run property suites on a grading")
    _add_job_flags(pv)
    pv.add_argument("--suite", default="all", choices=SUITES)
    pe = sub.add_parser("examples", help="reproduce a named example")
    pe.add_argument("name", help="frenkel-gross:<type>, g2-subregular or 2a2n:<n>")
    _add_output_flags(pe)
    pl = sub.add_parser("list", help="list the built-in gradings")
    _add_output_flags(pl)
    return parser


def _emit(doc: dict, fmt: str, out: Optional[Path], text: Optional[str] = None):
    payload = to_json(doc) if fmt == "json" else (text if text is not None else to_text(doc))
    if out is None:
        sys.stdout.write(payload)
    else:
        out.write_text(payload)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", None)
    try:
        if args.command == "list":
            code, doc = cmd_list()
            _emit(doc, fmt or "text", args.out, list_text(doc["gradings"]))
            return code
        if args.command == "examples":
            code, doc = cmd_examples(args.name, fmt or "json")
            _emit(doc, fmt or "json", args.out)
            return code
        if args.batch is not None:
            code, doc = run_batch(args.batch, args.command, getattr(args, "suite", "all"), args.jobs)
            _emit(doc, fmt or "json", args.out)
            return code
        spec = spec_from_args(args)
        if args.command == "analyze":
            code, doc = cmd_analyze(spec)
        else:
            code, doc = cmd_verify(spec, args.suite)
        _emit(doc, fmt or spec.format, args.out)
        return code
    except INPUT_ERRORS as exc:
        print(f"thetaconn: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"thetaconn: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"thetaconn: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
