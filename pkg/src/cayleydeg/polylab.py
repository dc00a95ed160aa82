"""Sparse multivariate polynomials, unreduced rational functions and dense
univariate polynomials over an exact field.

Terms are stored as ``{exponent tuple: raw coefficient}``; coefficients are
raw field values (see :mod:`cayleydeg.exactfield`).  Rational functions are
kept as unreduced ``(num, den)`` pairs and compared by cross-multiplication.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    CharacteristicTooSmall,
    DegreeZero,
    ExpressionTooLarge,
    FieldMismatch,
    PoleAtPoint,
    ZeroDenominator,
)
from .exactfield import QQ, Field, FieldElement, PrimeField

# Symbolic size guard: expansions growing past this many terms abort.
MAX_TERMS = 2_000_000


def _raw(field, c):
    if isinstance(c, FieldElement):
        if c.field != field:
            raise FieldMismatch(f"{c.field!r} scalar used with {field!r} polynomial")
        return c.value
    return field.coerce(c)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Mapping | None = None, *, _clean=False):
        self.field = field
        self.nvars = nvars
        if _clean:
            self.terms = terms
        else:
            norm = field.norm
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has length != {nvars}")
                if min(e, default=0) < 0:
                    raise ValueError(f"negative exponent in {e}")
                c = norm(clean.get(e, 0) + _raw(field, c))
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {}, _clean=True)

    @classmethod
    def constant(cls, field, nvars, c):
        c = _raw(field, c)
        return cls(field, nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, field, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls(field, nvars, {tuple(e): 1}, _clean=True)

    @classmethod
    def gens(cls, field, nvars):
        return [cls.var(field, nvars, i) for i in range(nvars)]

    @classmethod
    def linear(cls, field, coeffs: Sequence, const=0):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        terms[(0,) * n] = const
        return cls(field, n, terms)

    # -- basic queries ------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def degrees(self) -> tuple:
        return tuple(self.degree_in(i) for i in range(self.nvars))

    def variables(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def leading_term(self):
        """Lex-leading (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def coefficient(self, exponent) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(exponent), 0))

    # -- equality / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.is_constant() and self.constant_term() == _raw(self.field, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            if other.nvars != self.nvars:
                raise ValueError(f"variable count {self.nvars} vs {other.nvars}")
            return other
        return MultiPoly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        other = self._coerce(other)
        norm = self.field.norm
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(self.field, self.nvars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        norm = self.field.norm
        return MultiPoly(self.field, self.nvars, {e: norm(-c) for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _raw(self.field, c)
        if not c:
            return MultiPoly.zero(self.field, self.nvars)
        norm = self.field.norm
        return MultiPoly(self.field, self.nvars, {e: norm(v * c) for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return RatFunc(self, self._coerce(other))
        if isinstance(other, RatFunc):
            return RatFunc(self) / other
        return self.scale(self.field.inv(_raw(self.field, other)))

    # -- evaluation and calculus ---------------------------------------
    def evaluate(self, point: Sequence) -> FieldElement:
        return FieldElement(self.field, self.eval_raw([_raw(self.field, v) for v in point]))

    def eval_raw(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError(f"point of length {len(point)} for {self.nvars} variables")
        p = getattr(self.field, "p", None)
        powers = [{} for _ in range(self.nvars)]
        total = 0
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    v = cache.get(k)
                    if v is None:
                        v = cache[k] = pow(point[i], k, p) if p else point[i] ** k
                    t = t * v
            total += t
        return self.field.norm(total)

    def partial_derivative(self, i: int) -> "MultiPoly":
        norm = self.field.norm
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = norm(c * k)
                if v:
                    f = list(e)
                    f[i] = k - 1
                    out[tuple(f)] = v
        return MultiPoly(self.field, self.nvars, out, _clean=True)

    # -- structural transforms ----------------------------------------
    def embed(self, nvars: int, offset: int = 0) -> "MultiPoly":
        """Reinterpret in a larger ring, shifting variable i to i + offset."""
        pad_l, pad_r = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return MultiPoly(self.field, nvars, {pad_l + e + pad_r: c for e, c in self.terms.items()}, _clean=True)

    def to_field(self, field: Field) -> "MultiPoly":
        if field == self.field:
            return self
        if isinstance(self.field, PrimeField):
            raise FieldMismatch(f"cannot map {self.field!r} coefficients into {field!r}")
        return MultiPoly(field, self.nvars, {e: field.coerce(Fraction(c)) for e, c in self.terms.items()})

    def coefficients_in(self, i: int) -> list["MultiPoly"]:
        """Coefficients of powers of variable i (as polynomials not involving it)."""
        d = self.degree_in(i)
        buckets = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            f = list(e)
            f[i] = 0
            buckets[e[i]][tuple(f)] = c
        return [MultiPoly(self.field, self.nvars, b, _clean=True) for b in buckets]

    @classmethod
    def from_coefficients(cls, coeffs: Sequence["MultiPoly"], i: int) -> "MultiPoly":
        field, nvars = coeffs[0].field, coeffs[0].nvars
        out = MultiPoly.zero(field, nvars)
        x = MultiPoly.var(field, nvars, i)
        for k, c in enumerate(coeffs):
            if not c.is_zero():
                out = out + c * x ** k
        return out

    def laurent_substitute(self, images: Sequence[Sequence[int]], nvars: int) -> dict:
        """Substitute variable i by the Laurent monomial with exponent vector
        ``images[i]``; returns a term dict that may carry negative exponents."""
        norm = self.field.norm
        out = {}
        for e, c in self.terms.items():
            f = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    for j, a in enumerate(images[i]):
                        if a:
                            f[j] += k * a
            f = tuple(f)
            v = norm(out.get(f, 0) + c)
            if v:
                out[f] = v
            else:
                out.pop(f, None)
        return out

    def divide_monomial(self, exponent) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            f = tuple(a - b for a, b in zip(e, exponent))
            if min(f) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[f] = c
        return MultiPoly(self.field, self.nvars, out, _clean=True)

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    # -- display ------------------------------------------------------
    def sorted_terms(self):
        """Terms in degrevlex order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(reversed(t[0]))))

    def format(self, names: Sequence[str] | None = None, positive_leading=False) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        terms = self.sorted_terms()
        if not terms:
            return "0"
        p = getattr(self.field, "p", None)
        if positive_leading and _sign(terms[0][1], p) < 0:
            terms = [(e, self.field.norm(-c)) for e, c in terms]
        parts = []
        for idx, (e, c) in enumerate(terms):
            neg = _sign(c, p) < 0
            mag = -c if neg else c
            if p is not None and neg:
                mag = p - c
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if idx == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.format()})"

    __str__ = format


def _sign(c, p):
    if p is not None:
        return -1 if c > p // 2 else 1
    return -1 if c < 0 else 1


def _mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if not a.terms or not b.terms:
        return MultiPoly.zero(a.field, a.nvars)
    if len(a.terms) < len(b.terms):
        a, b = b, a
    n = a.nvars
    # Pack exponent vectors into integers so the inner loop adds ints.
    bound = max(x + y for x, y in zip(a.degrees(), b.degrees()))
    bits = max(bound.bit_length(), 1)
    shifts = [bits * i for i in range(n)]

    def pack(e):
        v = 0
        for k, s in zip(e, shifts):
            v |= k << s
        return v

    pa = [(pack(e), c) for e, c in a.terms.items()]
    pb = [(pack(e), c) for e, c in b.terms.items()]
    acc: dict = {}
    get = acc.get
    for eb, cb in pb:
        for ea, ca in pa:
            k = ea + eb
            acc[k] = get(k, 0) + ca * cb
        if len(acc) > MAX_TERMS:
            raise ExpressionTooLarge(f"product exceeds {MAX_TERMS} terms")
    norm = a.field.norm
    mask = (1 << bits) - 1
    out = {}
    for k, c in acc.items():
        c = norm(c)
        if c:
            out[tuple((k >> s) & mask for s in shifts)] = c
    return MultiPoly(a.field, n, out, _clean=True)


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Quotient a / b, raising ValueError unless b divides a exactly."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if b.is_constant():
        return a.scale(a.field.inv(b.constant_term()))
    field, norm = a.field, a.field.norm
    lb, cb = b.leading_term()
    inv_cb = field.inv(cb)
    rem = dict(a.terms)
    quot = {}
    while rem:
        la = max(rem)
        q_e = tuple(x - y for x, y in zip(la, lb))
        if min(q_e) < 0:
            raise ValueError("inexact multivariate division")
        q_c = norm(rem[la] * inv_cb)
        quot[q_e] = q_c
        for e, c in b.terms.items():
            f = tuple(x + y for x, y in zip(e, q_e))
            v = norm(rem.get(f, 0) - q_c * c)
            if v:
                rem[f] = v
            else:
                rem.pop(f, None)
    return MultiPoly(field, a.nvars, quot, _clean=True)


class RatFunc:
    """Unreduced fraction num/den of two MultiPolys."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if not isinstance(num, MultiPoly):
            if not isinstance(den, MultiPoly):
                raise TypeError("RatFunc needs at least one MultiPoly")
            num = MultiPoly.constant(den.field, den.nvars, num)
        if den is None:
            den = MultiPoly.constant(num.field, num.nvars, 1)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if num.field != den.field:
            raise FieldMismatch("numerator and denominator over different fields")
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p)

    @classmethod
    def constant(cls, field, nvars, c):
        return cls(MultiPoly.constant(field, nvars, c))

    @classmethod
    def var(cls, field, nvars, i):
        return cls(MultiPoly.var(field, nvars, i))

    @property
    def field(self):
        return self.num.field

    @property
    def nvars(self):
        return self.num.nvars

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return RatFunc.constant(self.field, self.nvars, other)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.den.is_constant() and o.den.constant_term() == 1:
            return RatFunc(self.num + o.num * self.den, self.den)
        if self.den.is_constant() and self.den.constant_term() == 1:
            return RatFunc(self.num * o.den + o.num, o.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (RatFunc, MultiPoly, int, Fraction, FieldElement)):
            return ratfunc_equal(self, self._coerce(other))
        return NotImplemented

    __hash__ = None

    def evaluate(self, point) -> FieldElement:
        return FieldElement(self.field, self.eval_raw([_raw(self.field, v) for v in point]))

    def eval_raw(self, point):
        d = self.den.eval_raw(point)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at {list(point)}")
        return self.field.norm(self.num.eval_raw(point) * self.field.inv(d))

    def partial_derivative(self, i: int) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.partial_derivative(i) * d - n * d.partial_derivative(i), d * d)

    def to_field(self, field) -> "RatFunc":
        return RatFunc(self.num.to_field(field), self.den.to_field(field))

    def embed(self, nvars, offset=0) -> "RatFunc":
        return RatFunc(self.num.embed(nvars, offset), self.den.embed(nvars, offset))

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def laurent_substitute(self, images, nvars=None) -> "RatFunc":
        """Monomial substitution with negative exponents cleared from num and
        den by one common monomial factor."""
        nvars = self.nvars if nvars is None else nvars
        num = self.num.laurent_substitute(images, nvars)
        den = self.den.laurent_substitute(images, nvars)
        if not den:
            raise ZeroDenominator("denominator vanishes after substitution")
        lows = [min(col) for col in zip(*num, *den)] if num else [min(col) for col in zip(*den)]
        shift = [-k if k < 0 else 0 for k in lows]

        def shifted(t):
            return MultiPoly(self.field, nvars, {tuple(a + s for a, s in zip(e, shift)): c for e, c in t.items()}, _clean=True)

        return RatFunc(shifted(num), shifted(den))

    def format(self, names=None) -> str:
        if self.den.is_constant() and self.den.constant_term() == 1:
            return self.num.format(names)
        return f"({self.num.format(names)})/({self.den.format(names)})"

    def __repr__(self):
        return f"RatFunc({self.format()})"


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    """f == g as rational functions: f.num*g.den - g.num*f.den is zero."""
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} vs {g.field!r}")
    if f.den == g.den:
        return f.num == g.num
    return f.num * g.den == g.num * f.den


def poly_arith(op: str, a: MultiPoly, b) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def _as_ratfunc(v) -> RatFunc:
    return v if isinstance(v, RatFunc) else RatFunc(v)


def _substitute_poly(f: MultiPoly, images: list[RatFunc], degs: Sequence[int]) -> MultiPoly:
    """Numerator of f under x_i -> P_i/Q_i with each Q_i raised to degs[i]."""
    target = images[0].num if images else None
    field, nvars = target.field, target.nvars
    num_pows = [{} for _ in images]
    den_pows = [{} for _ in images]
    trivial = [r.den.is_constant() and r.den.constant_term() == 1 for r in images]

    def pw(cache, base, k):
        v = cache.get(k)
        if v is None:
            v = cache[k] = base ** k
        return v

    total = MultiPoly.zero(field, nvars)
    for e, c in f.terms.items():
        t = MultiPoly.constant(field, nvars, c)
        for i, k in enumerate(e):
            if k:
                t = t * pw(num_pows[i], images[i].num, k)
            if not trivial[i] and degs[i] - k:
                t = t * pw(den_pows[i], images[i].den, degs[i] - k)
        total = total + t
        if len(total) > MAX_TERMS:
            raise ExpressionTooLarge(f"substitution exceeds {MAX_TERMS} terms")
    return total


def substitute(f, assignment: Mapping[int, object]) -> RatFunc:
    """Compose f with x_i -> assignment[i]; every variable of f must be covered."""
    fr = _as_ratfunc(f)
    used = fr.num.variables() | fr.den.variables()
    missing = used - set(assignment)
    if missing:
        raise KeyError(f"assignment does not cover variables {sorted(missing)}")
    if not assignment:
        return fr
    first = _as_ratfunc(next(iter(assignment.values())))
    field, nvars = first.field, first.nvars
    images = []
    for i in range(fr.nvars):
        if i in assignment:
            r = _as_ratfunc(assignment[i])
            if r.field != fr.field:
                raise FieldMismatch("assignment over a different field")
            if r.den.is_zero():
                raise ZeroDenominator(f"image of x{i + 1} has zero denominator")
            images.append(r)
        else:
            images.append(RatFunc.constant(field, nvars, 0))
    degs = [max(fr.num.degree_in(i), fr.den.degree_in(i), 0) for i in range(fr.nvars)]
    num = _substitute_poly(fr.num, images, degs)
    den = _substitute_poly(fr.den, images, degs)
    if den.is_zero():
        raise ZeroDenominator("denominator vanishes identically after substitution")
    return RatFunc(num, den)


def compose(components: Sequence, inner: Sequence) -> tuple:
    """Componentwise composition: components evaluated at the tuple ``inner``."""
    assignment = dict(enumerate(inner))
    return tuple(substitute(c, assignment) for c in components)


def partial_derivative(f, var: int):
    return f.partial_derivative(var)


def evaluate(f, point) -> FieldElement:
    return f.evaluate(point)


# ---------------------------------------------------------------------------
# Dense univariate polynomials


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable):
        norm = field.norm
        cs = [norm(_raw(field, c)) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = cs

    @classmethod
    def _make(cls, field, cs):
        u = cls.__new__(cls)
        while cs and not cs[-1]:
            cs.pop()
        u.field, u.coeffs = field, cs
        return u

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        norm = self.field.norm
        return UniPoly._make(self.field, [norm((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) for i in range(n)])

    def __neg__(self):
        norm = self.field.norm
        return UniPoly._make(self.field, [norm(-c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = _raw(self.field, other)
            norm = self.field.norm
            return UniPoly._make(self.field, [norm(x * c) for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._make(self.field, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        norm = self.field.norm
        return UniPoly._make(self.field, [norm(c) for c in out])

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly(self.field, [1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        field, norm = self.field, self.field.norm
        rem = list(self.coeffs)
        db = other.degree()
        inv_lc = field.inv(other.leading())
        quot = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = norm(rem[k + db] * inv_lc)
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] = norm(rem[k + j] - c * y)
        return UniPoly._make(field, quot), UniPoly._make(field, rem[:db] if db > 0 else [])

    def monic(self):
        if self.is_zero():
            return self
        return self * self.field.inv(self.leading())

    def derivative(self):
        norm = self.field.norm
        return UniPoly._make(self.field, [norm(i * c) for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        x = _raw(self.field, x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.field.norm(acc * x + c)
        return FieldElement(self.field, acc)

    def root_multiplicity_at_zero(self) -> int:
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        return k

    def strip_zero_root(self):
        """(g / s^k, k) with k the multiplicity of the root s = 0."""
        k = self.root_multiplicity_at_zero()
        return UniPoly._make(self.field, self.coeffs[k:]), k

    def __repr__(self):
        return f"UniPoly({self.coeffs} over {self.field!r})"


def unigcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_degree(g: UniPoly) -> int:
    """Number of distinct roots of g over the algebraic closure."""
    if g.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    p = g.field.characteristic
    if p and p <= g.degree():
        raise CharacteristicTooSmall(f"characteristic {p} <= degree {g.degree()}")
    return g.degree() - unigcd(g, g.derivative()).degree()


def univariate_restrict(F: MultiPoly, base: Sequence, direction: Sequence) -> UniPoly:
    """g(s) = F(base + s * direction)."""
    field = F.field
    base = [_raw(field, v) for v in base]
    direction = [_raw(field, v) for v in direction]
    if len(base) != F.nvars or len(direction) != F.nvars:
        raise ValueError("dimension mismatch")
    if not any(direction):
        raise ValueError("direction must be nonzero")
    lines = [UniPoly(field, [b, d]) for b, d in zip(base, direction)]
    cache: dict = {}
    total = UniPoly(field, [])
    for e, c in F.terms.items():
        t = UniPoly(field, [c])
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = lines[i] ** k
                t = t * cache[key]
        total = total + t
    return total


def to_unipoly(p: MultiPoly, var: int) -> UniPoly:
    """View a polynomial in a single variable as a UniPoly."""
    if p.variables() - {var}:
        raise ValueError("polynomial involves other variables")
    cs = [0] * (p.degree_in(var) + 1)
    for e, c in p.terms.items():
        cs[e[var]] = c
    return UniPoly(p.field, cs)


# ---------------------------------------------------------------------------
# Resultants


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: int) -> list[list[MultiPoly]]:
    a = p.coefficients_in(var)[::-1]
    b = q.coefficients_in(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    zero = MultiPoly.zero(p.field, p.nvars)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return rows


def bareiss_determinant(matrix: list[list[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant; every division is exact."""
    M = [list(row) for row in matrix]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    field, nvars = M[0][0].field, M[0][0].nvars
    sign = 1
    prev = MultiPoly.constant(field, nvars, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(field, nvars)
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(piv * M[i][j] - M[i][k] * M[k][j], prev)
        prev = piv
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Res_var(p, q) as the Sylvester determinant, via Bareiss elimination."""
    if p.field != q.field:
        raise FieldMismatch("resultant of polynomials over different fields")
    if p.degree_in(var) < 1 or q.degree_in(var) < 1:
        raise DegreeZero(f"input constant in variable {var}")
    return bareiss_determinant(sylvester_matrix(p, q, var))


__all__ = [
    "MAX_TERMS", "MultiPoly", "RatFunc", "UniPoly", "QQ",
    "bareiss_determinant", "compose", "evaluate", "exact_div", "partial_derivative",
    "poly_arith", "ratfunc_equal", "resultant", "squarefree_degree", "substitute",
    "sylvester_matrix", "to_unipoly", "unigcd", "univariate_restrict",
]
