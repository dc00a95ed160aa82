"""Exact coefficient fields: the rationals and prime fields F_p.

Polynomials in this package store *raw* coefficient values for speed:
``int``/``Fraction`` over QQ and ``int`` residues in ``[0, p)`` over F_p.
A field object knows how to normalize, invert and sample those raw values.
:class:`FieldElement` wraps a raw value together with its field for the
public scalar API and refuses to mix fields.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import FieldMismatch, NoRoot, SearchExhausted, ZeroInversion

Rational = Fraction

SEARCH_LIMIT = 2**31
# Bases that make Miller-Rabin deterministic below 3.4e14.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)
_MR_BOUND = 341_550_071_728_321


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_BOUND:
        raise ValueError(f"deterministic primality only below {_MR_BOUND}")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


class RationalField:
    characteristic = 0
    name = "QQ"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    @staticmethod
    def norm(v):
        if type(v) is int:
            return v
        v = Fraction(v)
        return v.numerator if v.denominator == 1 else v

    def inv(self, v):
        if v == 0:
            raise ZeroInversion("inverse of 0")
        return self.norm(Fraction(1) / v)

    def div(self, a, b):
        return self.norm(Fraction(a) * self.inv(b))

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field != self:
                raise FieldMismatch(f"{v.field!r} element in QQ")
            return v.value
        return self.norm(v)

    def random_raw(self, rng: random.Random, height: int = 100):
        return self.norm(Fraction(rng.randint(-height, height), rng.randint(1, height)))

    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)


class PrimeField:
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def norm(self, v):
        return v % self.p

    def inv(self, v):
        v %= self.p
        if v == 0:
            raise ZeroInversion(f"inverse of 0 in {self.name}")
        return pow(v, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field != self:
                raise FieldMismatch(f"{v.field!r} element in {self.name}")
            return v.value
        if isinstance(v, Fraction):
            return v.numerator * self.inv(v.denominator) % self.p
        return int(v) % self.p

    def random_raw(self, rng: random.Random, height: int = 0):
        return rng.randrange(self.p)

    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)


Field = Union[RationalField, PrimeField]
QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: object

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field!r} and {other.field!r}")
            return other.value
        return self.field.coerce(other)

    def _make(self, v):
        return FieldElement(self.field, self.field.norm(v))

    def __add__(self, other):
        return self._make(self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._make(self.value - self._other(other))

    def __rsub__(self, other):
        return self._make(self._other(other) - self.value)

    def __mul__(self, other):
        return self._make(self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __truediv__(self, other):
        return self._make(self.value * self.field.inv(self._other(other)))

    def __rtruediv__(self, other):
        return self._make(self._other(other) * self.field.inv(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if isinstance(self.field, PrimeField):
            return FieldElement(self.field, pow(self.value, k, self.field.p))
        return self._make(Fraction(self.value) ** k)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError, ZeroInversion):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return int(self.value)

    def __repr__(self):
        return f"{self.value} in {self.field!r}"


def field_inverse(x: FieldElement) -> FieldElement:
    return x.inverse()


def primitive_root(p: int) -> int:
    """Smallest generator of F_p^*, found by trial over g = 2, 3, 4, ..."""
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
        g += 1


def nth_root_of_unity(p: int, n: int) -> FieldElement:
    """A primitive n-th root of unity in F_p, namely g^((p-1)/n)."""
    if n < 1:
        raise ValueError("n must be positive")
    if (p - 1) % n != 0:
        raise NoRoot(f"{p} is not 1 mod {n}")
    F = GF(p)
    if n == 1:
        return F.one
    return F(pow(primitive_root(p), (p - 1) // n, p))


def find_prime_with_root(n: int, min: int) -> int:
    """Smallest prime p >= min with p = 1 (mod n)."""
    if n < 1 or min < 2:
        raise ValueError("need n >= 1 and min >= 2")
    p = min
    r = (p - 1) % n
    if r:
        p += n - r
    while p <= SEARCH_LIMIT:
        if is_prime(p):
            return p
        p += n
    raise SearchExhausted(f"no prime = 1 mod {n} in [{min}, 2^31]")


def make_stream(seed: int, worker: int | None = None) -> random.Random:
    """Seeded generator; child streams are keyed on (seed, worker)."""
    if worker is None:
        return random.Random(seed)
    return random.Random(f"{seed}:{worker}")


def random_element(field: Field, stream: random.Random) -> FieldElement:
    """Uniform residue over F_p, or a height-100 rational over QQ."""
    return FieldElement(field, field.random_raw(stream))
