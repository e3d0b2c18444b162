"""Coefficient domains: the rationals and prime fields."""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 2_147_483_647
CONFIRM_PRIME = 2_147_483_629


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    # deterministic Miller-Rabin for p < 3.3e24
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The field Q, elements stored as :class:`fractions.Fraction`."""

    modulus = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

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
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = Rationals()


class PrimeField:
    """GF(p); elements are plain ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.modulus = p
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator % self.modulus * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def inv(self, a):
        if a % self.modulus == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.modulus)

    def is_zero(self, a) -> bool:
        return a % self.modulus == 0

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF", self.modulus))

    def __repr__(self):
        return f"GF({self.modulus})"


class FpElement:
    """A standalone element of GF(p) with operator support.

    Polynomials store bare ints for speed; this wrapper is for callers who
    want arithmetic that refuses to mix moduli.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FpElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FpElement(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return FpElement(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other) % self.modulus
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return FpElement(self.value * pow(o, -1, self.modulus), self.modulus)

    def __pow__(self, e: int):
        return FpElement(pow(self.value, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"FpElement({self.value}, {self.modulus})"
