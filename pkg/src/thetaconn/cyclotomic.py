"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as rational coefficient vectors in the power basis
1, z, ..., z^(d-1) with d = phi(N), reduced modulo the N-th cyclotomic
polynomial.  Conductors 1 and 2 are the rationals; :func:`zeta` returns a
plain :class:`~fractions.Fraction` there so that rational computations never
pay for the polynomial representation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Tuple, Union

Scalar = Union[int, Fraction, "CycScalar"]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divmod_int(num: list, den: list) -> Tuple[list, list]:
    # integer polynomials, den monic; coefficients low -> high
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        if c:
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Row k holds the coefficients of x^k mod Phi_n, for 0 <= k < 2*deg."""
    phi = cyclotomic_polynomial(n)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(max(2 * d - 1, n)):
        rows.append(tuple(cur))
        # multiply by x, then eliminate x^d using the monic polynomial
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> Tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        c = a[shift + len(b) - 1] / lead
        if c:
            q[shift] = c
            for i, bi in enumerate(b):
                a[shift + i] -= c * bi
    return _poly_trim(q), _poly_trim(a[: len(b) - 1])


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


class CycScalar:
    """An element of the N-th cyclotomic field, immutable and hashable."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = ()):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        d = len(cyclotomic_polynomial(conductor)) - 1
        raw = [Fraction(c) for c in coeffs]
        if len(raw) > d:
            raw = _reduce(conductor, raw)
        raw = raw + [Fraction(0)] * (d - len(raw))
        self.conductor = conductor
        self.coeffs: Tuple[Fraction, ...] = tuple(raw)
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycScalar":
        return cls(conductor, [Fraction(value)])

    def lift(self, conductor: int) -> "CycScalar":
        """Re-express ``self`` in the field of a multiple of its conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        step = conductor // self.conductor
        raw = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for k, c in enumerate(self.coeffs):
            raw[k * step] = c
        return CycScalar(conductor, _reduce(conductor, raw))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> Tuple["CycScalar", "CycScalar"]:
        if isinstance(other, CycScalar):
            if other.conductor == self.conductor:
                return self, other
            n = _lcm(self.conductor, other.conductor)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, CycScalar(self.conductor, [other])
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycScalar(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycScalar(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycScalar(self.conductor, [x * other for x in self.coeffs])
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        n = a.conductor
        d = len(a.coeffs)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycScalar(n, _reduce(n, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        n = self.conductor
        if self.is_rational():
            return CycScalar(n, [1 / self.coeffs[0]])
        # extended Euclid: s*self + t*Phi = 1
        phi = [Fraction(c) for c in cyclotomic_polynomial(n)]
        r0, r1 = phi, _poly_trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return CycScalar(n, _reduce(n, [x / c for x in s1]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return CycScalar(self.conductor, [x / other for x in self.coeffs])
        if isinstance(other, CycScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = CycScalar(self.conductor, [1])
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # comparisons ----------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycScalar):
            a, b = self._coerce(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            # rational elements hash like the Fraction they equal
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.conductor, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"CycScalar({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = f"z{self.conductor}" + (f"^{k}" if k > 1 else "")
                terms.append(mono if c == 1 else f"({c})*{mono}")
        return " + ".join(terms) if terms else "0"


def _reduce(n: int, raw: Sequence[Fraction]) -> list:
    table = _reduction_table(n)
    d = len(table[0])
    if len(raw) > len(table):
        # reduce x^k by periodicity x^n = 1 before the table lookup
        folded = [Fraction(0)] * n
        for k, c in enumerate(raw):
            folded[k % n] += c
        raw = folded
    out = [Fraction(0)] * d
    for k, c in enumerate(raw):
        if c:
            row = table[k]
            for i in range(d):
                if row[i]:
                    out[i] += c * row[i]
    return out


def zeta(n: int, k: int = 1):
    """The root of unity exp(2*pi*i*k/n); a Fraction when n <= 2."""
    k %= n
    if n <= 2:
        return Fraction(-1) if k else Fraction(1)
    raw = [Fraction(0)] * (k + 1)
    raw[k] = Fraction(1)
    return CycScalar(n, _reduce(n, raw))


def simplify(x):
    """Demote rational cyclotomic elements to Fraction."""
    if isinstance(x, CycScalar) and x.is_rational():
        return x.coeffs[0]
    if isinstance(x, int):
        return Fraction(x)
    return x


def is_rational(x) -> bool:
    return not isinstance(x, CycScalar) or x.is_rational()


def format_scalar(x) -> str:
    """Exact string form: 'p/q' for rationals, power-basis sum otherwise."""
    x = simplify(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)
