"""Exact base fields: arbitrary-precision rationals and prime fields F_p.

Field objects carry the arithmetic; elements are plain values (Fraction for
the rationals, ints in [0, p) for F_p). Everything is immutable and
hashable, so fields and elements are safe to share freely.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


def is_prime(p: int) -> bool:
    """Trial division; inputs are assumed desk-scale (p < 2**64)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Rationals:
    """The field Q. Elements are fractions.Fraction values (always reduced,
    positive denominator -- Fraction guarantees both)."""

    name = "Q"

    def __repr__(self):
        return "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def from_int(self, k: int):
        return Fraction(k)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise InputError(f"cannot interpret {x!r} as a rational scalar")

    def parse(self, s: str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational scalar: {s!r}") from exc

    def format(self, a) -> str:
        return str(a)

    def descriptor(self) -> dict:
        return {"type": "Q"}

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The field F_p for prime p. Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise InputError(f"field characteristic must be prime, got {p}")
        self.p = p
        self.name = f"F{p}"

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, k: int):
        return k % self.p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.parse(x)
        raise InputError(f"cannot interpret {x!r} as an F_{self.p} residue")

    def parse(self, s: str):
        try:
            return int(s.strip(), 10) % self.p
        except ValueError as exc:
            raise InputError(f"not an F_{self.p} residue: {s!r}") from exc

    def format(self, a) -> str:
        return str(a % self.p)

    def descriptor(self) -> dict:
        return {"type": "Fp", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(desc) -> Rationals | PrimeField:
    """Inverse of Field.descriptor(); raises InputError on junk."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise InputError(f"bad field descriptor: {desc!r}")
    if desc["type"] == "Q":
        return QQ
    if desc["type"] == "Fp":
        if "p" not in desc:
            raise InputError("field descriptor Fp requires 'p'")
        return PrimeField(desc["p"])
    raise InputError(f"unknown field type: {desc['type']!r}")
