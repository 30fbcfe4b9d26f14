"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python values (`fractions.Fraction` for Q, ints in
[0, p) for F_p); the field object supplies the arithmetic.  Nothing in
this package ever touches floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import StructureError

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_INT_RE = re.compile(r"^[+-]?\d+$")


class Rationals:
    """The field Q with exact Fraction arithmetic."""

    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(a) / b

    def is_zero(self, a):
        return a == 0

    def sign(self, exponent):
        """(-1)**exponent as a scalar."""
        return Fraction(-1) if exponent % 2 else Fraction(1)

    def parse(self, text):
        """Parse "p/q" or an integer string; reject anything else."""
        s = str(text).strip()
        if not _RATIONAL_RE.match(s):
            raise StructureError(f"not a rational scalar: {text!r}")
        value = Fraction(s)
        return value

    def format(self, a):
        # Fraction normalises to q > 0 and gcd(p, q) = 1 already.
        return str(Fraction(a))

    def descriptor(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """The prime field F_p; scalars are ints reduced into [0, p)."""

    def __init__(self, p):
        if not isinstance(p, int) or p < 2:
            raise StructureError(f"not a prime: {p!r}")
        for d in range(2, int(p ** 0.5) + 1):
            if p % d == 0:
                raise StructureError(f"not a prime: {p}")
        self.p = p
        self.characteristic = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def sign(self, exponent):
        return (self.p - 1) if exponent % 2 else 1 % self.p

    def parse(self, text):
        s = str(text).strip()
        if not _INT_RE.match(s):
            raise StructureError(f"not an F_{self.p} scalar: {text!r}")
        n = int(s)
        if not 0 <= n < self.p:
            raise StructureError(
                f"F_{self.p} scalar out of range [0, {self.p}): {text!r}"
            )
        return n

    def format(self, a):
        return str(a % self.p)

    def descriptor(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def field_from_descriptor(desc):
    """Inverse of Field.descriptor(): "Q" or {"Fp": p}."""
    if desc == "Q":
        return Rationals()
    if isinstance(desc, dict) and set(desc) == {"Fp"}:
        return PrimeField(int(desc["Fp"]))
    raise StructureError(f"unknown field descriptor: {desc!r}")
