"""Exact scalars: rationals (via ``fractions.Fraction``) and residues mod a prime.

Every field element in the package is either a ``Fraction`` (field Q) or a
``Residue`` (field F_p).  Both support the usual arithmetic operators, so the
linear algebra code is written once for both fields.  Mixing the two, or
residues with different moduli, raises ``FieldMismatch``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import FieldMismatch, ParseError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@total_ordering
class Residue:
    """An element of Z/pZ, always stored reduced to [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} and F_{other.p} elements mixed")
            return other.value
        if isinstance(other, int):
            return other
        raise FieldMismatch(f"cannot combine F_{self.p} element with {type(other).__name__}")

    def __add__(self, other):
        return Residue(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return Residue(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return Residue(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Residue(self._other(other), self.p).inverse()

    def __rtruediv__(self, other):
        return Residue(self._other(other), self.p) * self.inverse()

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __lt__(self, other):
        # only used to sort canonically; not a field order
        if isinstance(other, Residue):
            return self.value < other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


_INT = r"[+-]?\d+"
_RATIONAL_RE = re.compile(rf"^\s*({_INT})(?:\s*/\s*(\d+))?\s*$")
_INT_RE = re.compile(rf"^\s*({_INT})\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``kind='Q'``) or a prime field (``kind='Fp'``)."""

    kind: str = "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "Fp":
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not a prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("Fp", p)

    @property
    def is_finite(self) -> bool:
        return self.kind == "Fp"

    @property
    def order(self) -> int | None:
        return self.p

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F{self.p}"

    def __call__(self, value):
        """Coerce an int, Fraction, Residue or string into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.kind == "Q":
            if isinstance(value, Residue):
                raise FieldMismatch(f"F_{value.p} element used over Q")
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldMismatch(f"cannot coerce {value!r} into Q")
        if isinstance(value, Residue):
            if value.p != self.p:
                raise FieldMismatch(f"F_{value.p} element used over F_{self.p}")
            return value
        if isinstance(value, Fraction):
            return Residue(value.numerator, self.p) / Residue(value.denominator, self.p)
        if isinstance(value, int):
            return Residue(value, self.p)
        raise FieldMismatch(f"cannot coerce {value!r} into F_{self.p}")

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        if self.kind == "Q":
            return isinstance(x, Fraction)
        return isinstance(x, Residue) and x.p == self.p

    def elements(self):
        """All elements of a finite field, in residue order."""
        if not self.is_finite:
            raise ValueError("Q is infinite")
        return [Residue(v, self.p) for v in range(self.p)]

    def parse(self, text: str):
        if self.kind == "Q":
            m = _RATIONAL_RE.match(text)
            if not m:
                raise ParseError(f"not a rational number: {text!r}")
            num, den = int(m.group(1)), int(m.group(2) or 1)
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            return Fraction(num, den)
        m = _INT_RE.match(text)
        if not m:
            raise ParseError(f"not an integer residue: {text!r}")
        return Residue(int(m.group(1)), self.p)

    def format(self, x) -> str:
        return str(self(x))

    def descriptor(self) -> dict:
        if self.kind == "Q":
            return {"kind": "Q"}
        return {"kind": "Fp", "p": self.p}

    @classmethod
    def from_descriptor(cls, d) -> "FieldSpec":
        if isinstance(d, str):
            return cls.from_string(d)
        try:
            if d["kind"] == "Q":
                return cls("Q")
            return cls("Fp", int(d["p"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad field descriptor {d!r}") from exc

    @classmethod
    def from_string(cls, text: str) -> "FieldSpec":
        """Accepts ``Q``, ``F5``, ``Fp:5``, ``GF5``."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls("Q")
        m = re.fullmatch(r"(?:Fp:|F|GF)(\d+)", t)
        if not m:
            raise ParseError(f"bad field name {text!r}")
        try:
            return cls("Fp", int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


QQ = FieldSpec("Q")


def field_of(x) -> FieldSpec:
    if isinstance(x, Residue):
        return FieldSpec("Fp", x.p)
    if isinstance(x, Fraction):
        return QQ
    raise FieldMismatch(f"{x!r} is not a field element")


def scalar_arith(op: str, a, b=None):
    """Apply ``op`` in {add, sub, mul, neg, inv} to scalars of one field."""
    fa = field_of(a)
    if b is not None and field_of(b) != fa:
        raise FieldMismatch(f"{fa} and {field_of(b)} operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return a.inverse() if isinstance(a, Residue) else 1 / a
    raise ValueError(f"unknown operation {op!r}")
