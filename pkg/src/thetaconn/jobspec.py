"""Job specifications, the key=value config grammar, and the built-in examples.

Config grammar (one job per file)::

    # comment
    type = G2            # or: series = G / rank = 2
    sigma = id           # or a 1-based node permutation, e.g. 2,1
    kac = 1,1,0
    vector = 1,0,-1/2,3  # coordinates in the g_1 basis ...
    sample = stable      # ... or a sampling predicate with a seed
    seed = 7
    truncation = 12
    format = json

Blank lines and text after ``#`` are ignored; keys are case-insensitive.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .gradings import PREDICATES, GradedDecomposition, make_grading
from .liecore import InvalidTypeError, parse_type, simple_lie_algebra


class SpecError(ValueError):
    """Malformed job specification."""


KEYS = ("type", "series", "rank", "sigma", "kac", "vector", "sample", "seed", "truncation", "format", "name")
FORMATS = ("json", "text")


@dataclass(frozen=True)
class JobSpec:
    type: str
    kac: Tuple[int, ...]
    sigma: Optional[Tuple[int, ...]] = None  # 0-based node images; None = identity
    vector: Optional[Tuple[Fraction, ...]] = None
    sample: Optional[str] = None
    seed: int = 0
    truncation: Optional[int] = None
    format: str = "json"
    name: Optional[str] = None

    def __post_init__(self):
        try:
            series, rank = parse_type(self.type)
        except InvalidTypeError as exc:
            raise SpecError(str(exc)) from None
        object.__setattr__(self, "type", f"{series}{rank}")
        if self.vector is not None and self.sample is not None:
            raise SpecError("give either an explicit vector or a sampling predicate, not both")
        if self.vector is None and self.sample is None:
            object.__setattr__(self, "sample", "stable")
        if self.sample is not None and self.sample not in PREDICATES:
            raise SpecError(f"unknown predicate {self.sample!r}; choose from {', '.join(PREDICATES)}")
        if self.format not in FORMATS:
            raise SpecError(f"unknown format {self.format!r}")
        if self.truncation is not None and self.truncation < 1:
            raise SpecError("truncation must be a positive integer")
        if self.seed < 0:
            raise SpecError("seed must be nonnegative")

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "sigma": "id" if self.sigma is None else ",".join(str(p + 1) for p in self.sigma),
            "kac": ",".join(map(str, self.kac)),
            "vector": None if self.vector is None else ",".join(_frac_str(c) for c in self.vector),
            "sample": self.sample,
            "seed": self.seed,
            "truncation": self.truncation,
            "format": self.format,
            "name": self.name,
        }

    def to_config(self) -> str:
        lines = []
        for k, v in self.to_dict().items():
            if v is not None:
                lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text: str) -> "JobSpec":
        return cls.from_mapping(parse_config(text))

    @classmethod
    def from_mapping(cls, d: Dict[str, str]) -> "JobSpec":
        unknown = set(d) - set(KEYS)
        if unknown:
            raise SpecError(f"unknown keys: {', '.join(sorted(unknown))}")
        if "type" in d:
            typ = d["type"]
            if "rank" in d and not any(ch.isdigit() for ch in typ):
                typ = typ + d["rank"]
        elif "series" in d and "rank" in d:
            typ = d["series"] + d["rank"]
        else:
            raise SpecError("missing algebra type (type = G2, or series and rank)")
        if "kac" not in d:
            raise SpecError("missing kac coordinates")
        return cls(
            type=typ,
            kac=parse_int_list(d["kac"], "kac"),
            sigma=parse_sigma(d.get("sigma")),
            vector=parse_vector(d["vector"]) if d.get("vector") else None,
            sample=d.get("sample") or None,
            seed=_int(d.get("seed", "0"), "seed"),
            truncation=_int(d["truncation"], "truncation") if d.get("truncation") else None,
            format=d.get("format", "json"),
            name=d.get("name") or None,
        )

    def grading(self) -> GradedDecomposition:
        alg = simple_lie_algebra(self.type)
        return make_grading(alg, self.kac, self.sigma)


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _int(text: str, what: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise SpecError(f"{what}: expected an integer, got {text!r}") from None


def parse_config(text: str) -> Dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        key = key.lower()
        if key in out:
            raise SpecError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def parse_int_list(text: str, what: str) -> Tuple[int, ...]:
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise SpecError(f"{what}: empty list")
    return tuple(_int(p, what) for p in parts)


def parse_sigma(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None or text.strip().lower() in ("", "id", "identity"):
        return None
    perm = parse_int_list(text, "sigma")
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise SpecError(f"sigma: {text!r} is not a permutation of 1..{len(perm)}")
    out = tuple(p - 1 for p in perm)
    return None if out == tuple(range(len(out))) else out


def parse_vector(text: str) -> Tuple[Fraction, ...]:
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"vector: cannot parse {text!r} as rationals") from None


# ---------------------------------------------------------------------------
# built-in examples

EXAMPLE_SEED = 7


def _flip(n: int) -> Tuple[int, ...]:
    return tuple(n - 1 - i for i in range(n))


def example_spec(name: str) -> JobSpec:
    """JobSpec for a named example; SpecError if the name is unknown."""
    if name == "g2-subregular":
        return JobSpec(type="G2", kac=(1, 1, 0), sample="stable", seed=EXAMPLE_SEED, name=name)
    head, _, arg = name.partition(":")
    if head == "frenkel-gross" and arg:
        try:
            series, rank = parse_type(arg)
        except InvalidTypeError as exc:
            raise SpecError(str(exc)) from None
        # principal grading, X = sum_i E_i + E_0 with all coefficients 1
        return JobSpec(type=f"{series}{rank}", kac=(1,) * (rank + 1),
                       vector=(Fraction(1),) * (rank + 1), name=name)
    if head == "2a2n" and arg:
        n = _int(arg, "2a2n index")
        if not 1 <= n <= 4:
            raise SpecError("2a2n:<n> needs 1 <= n <= 4")
        return JobSpec(type=f"A{2 * n}", kac=(1,) + (0,) * n, sigma=_flip(2 * n),
                       sample="stable", seed=EXAMPLE_SEED, name=name)
    raise SpecError(f"unknown example {name!r}; try 'thetaconn list'")


LISTED = ("g2-subregular", "2a2n:1", "2a2n:2",
          "frenkel-gross:A1", "frenkel-gross:A2", "frenkel-gross:A3",
          "frenkel-gross:B2", "frenkel-gross:C3", "frenkel-gross:G2")


def with_overrides(spec: JobSpec, **kw) -> JobSpec:
    kw = {k: v for k, v in kw.items() if v is not None}
    if "vector" in kw:
        kw.setdefault("sample", None)
    if "sample" in kw and kw["sample"] is not None:
        kw.setdefault("vector", None)
    return replace(spec, **kw)
