"""Explicit constructions: the SL_n and G_2 torus maps, the G_2 sextic,
the classical matrix Cayley transform and the table of known Cayley degrees.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .engine import IsogenySpec, MapCandidate, ProjectionSpec, compose_with_isogeny, product_map
from .errors import (
    BadCharacteristic,
    BadParameter,
    BadRoot,
    EliminationMismatch,
    HyperplaneCase,
    NotOnHypersurface,
    SingularDenominator,
)
from .exactfield import GF, QQ, FieldElement, PrimeField, nth_root_of_unity
from .polylab import MultiPoly, RatFunc, UniPoly, compose, exact_div, ratfunc_equal, resultant, substitute, unigcd
from .weyltorus import builtin_pair, g2_pair, sl_pair

# ---------------------------------------------------------------------------
# SL_n


def sln_phi(n: int, fld=QQ) -> tuple:
    """x_i -> (x_i + 1) / x_i."""
    xs = MultiPoly.gens(fld, n)
    return tuple(RatFunc(x + 1, x) for x in xs)


def sln_psi(n: int, fld=QQ) -> MapCandidate:
    """y_i -> 1 / (y_i - 1); lands on the hypersurface X, not on t."""
    if n < 2:
        raise BadParameter("n must be >= 2")
    ys = MultiPoly.gens(fld, n)
    one = MultiPoly.constant(fld, n, 1)
    return MapCandidate(sl_pair(n), tuple(RatFunc(one, y - 1) for y in ys), f"psi_sl{n}")


def sln_hypersurface(n: int, fld=QQ) -> MultiPoly:
    """(x_1 + 1)...(x_n + 1) - x_1...x_n."""
    if n < 2:
        raise BadParameter("n must be >= 2")
    xs = MultiPoly.gens(fld, n)
    lhs = MultiPoly.constant(fld, n, 1)
    rhs = MultiPoly.constant(fld, n, 1)
    for x in xs:
        lhs = lhs * (x + 1)
        rhs = rhs * x
    return lhs - rhs


def sln_irreducibility_certificate(n: int) -> bool:
    """f has degree exactly 1 in x_i once every other coordinate is set to 1,
    and f(0) != 0 so no coordinate hyperplane divides it."""
    f = sln_hypersurface(n)
    if f.constant_term() == 0:
        return False
    xs = MultiPoly.gens(QQ, n)
    one = MultiPoly.constant(QQ, n, 1)
    for i in range(n):
        restricted = substitute(f, {j: xs[i] if j == i else one for j in range(n)}).num
        if restricted.degree() != 1:
            return False
    return True


def sln_roots(n: int, p: int) -> list:
    """The n - 1 roots zeta != 1 of zeta^n = 1, ordered as zeta_0^k for k = 1..n-1."""
    z = nth_root_of_unity(p, n)
    return [z ** k for k in range(1, n)]


def center_is_smooth(n: int, p: int) -> bool:
    """No common root of (1+t)^n - t^n and its partial-derivative companion."""
    F = GF(p)
    one_t, t = UniPoly(F, [1, 1]), UniPoly(F, [0, 1])
    f = one_t ** n - t ** n
    df = one_t ** (n - 1) - t ** (n - 1)
    return unigcd(f, df).degree() == 0


def sln_center(n: int, p: int, zeta_index: int = 1) -> tuple:
    """The center (a, ..., a) with a = 1 / (zeta - 1), zeta = zeta_0^zeta_index."""
    if n == 2:
        raise HyperplaneCase("for n = 2 the hypersurface is a hyperplane")
    if n < 2:
        raise BadParameter("n must be >= 3")
    if zeta_index % n == 0:
        raise BadRoot("zeta = 1 gives no center")
    if not 1 <= zeta_index < n:
        raise BadParameter(f"zeta_index must lie in 1..{n - 1}")
    zeta = sln_roots(n, p)[zeta_index - 1]
    a = (zeta - 1).inverse()
    point = (a,) * n
    f = sln_hypersurface(n, GF(p))
    if f.evaluate(point) != 0:
        raise NotOnHypersurface(f"(a,...,a) with a = {a.value} is not on X")
    if n * a == 0:
        raise NotOnHypersurface("center lies on t")
    if not center_is_smooth(n, p):
        raise NotOnHypersurface("center is a singular point of X")
    return point


def sln_projection(n: int, a: FieldElement) -> tuple:
    """pi_i(x) = a (n x_i - S) / (n a - S), S = sum x_j: the point of t on the
    line through (a,...,a) and x."""
    fld = a.field
    xs = MultiPoly.gens(fld, n)
    S = sum(xs[1:], xs[0])
    den = MultiPoly.constant(fld, n, n * a) - S
    return tuple(RatFunc((x * n - S) * a, den) for x in xs)


def sln_full_candidate(n: int, p: int, zeta_index: int = 1) -> MapCandidate:
    """pi o psi on the sl(n) torus over F_p."""
    a = sln_center(n, p, zeta_index)[0]
    psi = sln_psi(n, GF(p))
    comps = compose(sln_projection(n, a), psi.components)
    return MapCandidate(sl_pair(n), comps, f"sl{n}[zeta{zeta_index}]")


def sln_projection_spec(n: int, p: int, zeta_index: int = 1) -> ProjectionSpec:
    center = sln_center(n, p, zeta_index)
    F = GF(p)
    return ProjectionSpec(sln_hypersurface(n, F), (1,) * n, center=tuple(c.value for c in center))


# ---------------------------------------------------------------------------
# G_2


def _check_char(fld):
    if isinstance(fld, PrimeField) and fld.p == 3:
        raise BadCharacteristic("1/3 is needed: characteristic 3 is excluded")


def g2_phi(fld=QQ) -> tuple:
    xs = MultiPoly.gens(fld, 3)
    return tuple(RatFunc(x - 1, x + 1) for x in xs)


def g2_psi(fld=QQ) -> tuple:
    ys = MultiPoly.gens(fld, 3)
    return tuple(RatFunc(-(y + 1), y - 1) for y in ys)


def g2_alpha(fld=QQ) -> tuple:
    """Subtract the mean of the coordinates."""
    _check_char(fld)
    xs = MultiPoly.gens(fld, 3)
    mean = (xs[0] + xs[1] + xs[2]) * fld.inv(3)
    return tuple(RatFunc(x - mean) for x in xs)


def g2_candidate(fld=QQ) -> MapCandidate:
    _check_char(fld)
    return MapCandidate(g2_pair(), compose(g2_alpha(fld), g2_psi(fld)), "g2")


def g2_quadric(fld=QQ) -> MultiPoly:
    x1, x2, x3 = MultiPoly.gens(fld, 3)
    return x1 * x2 + x2 * x3 + x1 * x3 + 1


def g2_quadric_pullback(fld=QQ) -> tuple:
    """(q, ok): ok iff y1 y2 y3 - 1 pulls back under phi to numerator -2 q."""
    y1, y2, y3 = MultiPoly.gens(fld, 3)
    pulled = substitute(y1 * y2 * y3 - 1, dict(enumerate(g2_phi(fld))))
    q = g2_quadric(fld)
    return q, pulled.num == q * (-2)


def g2_projection_spec(fld=QQ) -> ProjectionSpec:
    return ProjectionSpec(g2_quadric(fld), (1, 1, 1), direction=(1, 1, 1))


def g2_cubic_variant(fld=QQ) -> tuple:
    """The sign-flipped transform (1 - x)/(x + 1): its pullback hypersurface
    (the cubic x1 x2 x3 + x1 + x2 + x3) and the resulting map alpha o psi'."""
    _check_char(fld)
    xs = MultiPoly.gens(fld, 3)
    ys = MultiPoly.gens(fld, 3)
    phi = tuple(RatFunc(1 - x, x + 1) for x in xs)
    y1, y2, y3 = ys
    pulled = substitute(y1 * y2 * y3 - 1, dict(enumerate(phi))).num
    cubic = exact_div(pulled, MultiPoly.constant(fld, 3, -2))
    psi = tuple(RatFunc(1 - y, y + 1) for y in ys)
    cand = MapCandidate(g2_pair(), compose(g2_alpha(fld), psi), "g2-cubic")
    return cubic, cand


# ---------------------------------------------------------------------------
# Elimination for the G_2 module M = span(s1, s2)

SEXTIC_VARS = ("t1", "t2", "s1", "s2")


def _reference_sextic() -> list:
    """Displayed coefficients of t1^0..t1^6, as polynomials in (s1, s2)."""
    s1, s2 = MultiPoly.gens(QQ, 2)
    one = MultiPoly.constant(QQ, 2, 1)
    return [
        one,
        s1 + s2 + 1,
        s1 * s2 + s1 * 2 + s2 * 2 + 1,
        s1 ** 2 + s2 ** 2 - 5,
        s1 * s2 - s1 * 2 - s2 * 2 - 1,
        -(s1 + s2),
        one,
    ]


REFERENCE_SEXTIC = _reference_sextic()


@dataclass
class SexticResult:
    coefficients: list  # t1^k coefficient, k = 0..6, in QQ[s1, s2]
    resultant: MultiPoly
    stripped_t1_power: int
    content: MultiPoly
    recovery_ok: bool
    mismatches: dict = field(default_factory=dict)

    @property
    def matches_reference(self) -> bool:
        return not self.mismatches

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_poly(self, fld=QQ) -> MultiPoly:
        """The normalized polynomial in (t1, s1, s2)."""
        out = MultiPoly.zero(fld, 3)
        t1 = MultiPoly.var(fld, 3, 0)
        for k, c in enumerate(self.coefficients):
            out = out + c.to_field(fld).embed(3, 1) * t1 ** k
        return out

    def format_lines(self) -> list[str]:
        return [f"t1^{k}: {c.format(['s1', 's2'])}" for k, c in reversed(list(enumerate(self.coefficients)))]


def sextic_system() -> tuple:
    """The two equations for (t1, t2) given (s1, s2), denominators cleared."""
    t1, t2, s1, s2 = [RatFunc(v) for v in MultiPoly.gens(QQ, 4)]
    e1 = -t2 + 1 / t2 - (s1 - t1 + 1 / t1)
    e2 = t1 * t2 - 1 / (t1 * t2) - (s2 - t1 + 1 / t1)
    out = []
    for e in (e1, e2):
        num = e.num
        out.append(num.divide_monomial(num.min_exponents()))
    return tuple(out)


def _recovery_identity() -> bool:
    """t2 = (t1^2 - 1) / (t1^2 s1 + t1 s2 - t1^3 - t1^2 + t1 + 1) holds once
    s1, s2 are written in terms of (t1, t2)."""
    t1, t2 = [RatFunc(v) for v in MultiPoly.gens(QQ, 2)]
    t3 = 1 / (t1 * t2)
    z1, z2, z3 = (t - 1 / t for t in (t1, t2, t3))
    s1, s2 = z1 - z2, z1 - z3
    rhs = (t1 ** 2 - 1) / (t1 ** 2 * s1 + t1 * s2 - t1 ** 3 - t1 ** 2 + t1 + 1)
    return ratfunc_equal(rhs, t2)


def eliminate_sextic() -> SexticResult:
    """Res_{t2} of the cleared system, normalized to be monic in t1."""
    e1, e2 = sextic_system()
    res = resultant(e1, e2, 1)
    k = min(e[0] for e in res.terms)
    mono = (k, 0, 0, 0)
    stripped = res.divide_monomial(mono)
    coeffs4 = stripped.coefficients_in(0)
    content = coeffs4[-1]
    coeffs = [exact_div(c, content) for c in coeffs4]
    # Drop the unused t1, t2 slots: coefficients live in QQ[s1, s2].
    coeffs = [MultiPoly(QQ, 2, {e[2:]: v for e, v in c.terms.items()}) for c in coeffs]
    mismatches = {}
    for deg in range(max(len(coeffs), len(REFERENCE_SEXTIC))):
        mine = coeffs[deg] if deg < len(coeffs) else MultiPoly.zero(QQ, 2)
        theirs = REFERENCE_SEXTIC[deg] if deg < len(REFERENCE_SEXTIC) else MultiPoly.zero(QQ, 2)
        if mine != theirs:
            mismatches[deg] = (mine.format(["s1", "s2"]), theirs.format(["s1", "s2"]))
    return SexticResult(coeffs, res, k, content, _recovery_identity(), mismatches)


def g2_sextic_elimination() -> SexticResult:
    """As :func:`eliminate_sextic`, raising if the result differs from the
    displayed polynomial."""
    result = eliminate_sextic()
    if not result.matches_reference:
        detail = "; ".join(f"t1^{d}: computed {a} vs displayed {b}" for d, (a, b) in sorted(result.mismatches.items()))
        raise EliminationMismatch(f"eliminated sextic differs: {detail}", result.mismatches)
    return result


def sextic_consistency(poly: MultiPoly, p: int = 1009, samples: int = 100, seed: int = 0) -> int:
    """Number of random torus points (t1, t2) over F_p on which ``poly``
    (in t1, s1, s2) vanishes at s = (z1 - z2, z1 - z3)."""
    F = GF(p)
    P = poly.to_field(F)
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        t1 = rng.randrange(1, p)
        t2 = rng.randrange(1, p)
        t3 = pow(t1 * t2, -1, p)
        z = [(t - pow(t, -1, p)) % p for t in (t1, t2, t3)]
        s1, s2 = (z[0] - z[1]) % p, (z[0] - z[2]) % p
        if P.eval_raw([t1, s1, s2]) == 0:
            hits += 1
    return hits


# ---------------------------------------------------------------------------
# Classical Cayley transform on matrices


class SquareMatrix:
    """Dense square matrix with exact entries over QQ or F_p."""

    __slots__ = ("field", "rows")

    def __init__(self, rows, fld=QQ):
        self.field = fld
        self.rows = tuple(tuple(fld.coerce(v) for v in row) for row in rows)
        if any(len(r) != len(self.rows) for r in self.rows):
            raise BadParameter("matrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n, fld=QQ):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], fld)

    @classmethod
    def random_skew(cls, n, rng: random.Random, height: int = 9):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = Fraction(rng.randint(-height, height), rng.randint(1, height))
                rows[i][j], rows[j][i] = v, -v
        return cls(rows)

    def __eq__(self, other):
        return isinstance(other, SquareMatrix) and self.field == other.field and self.rows == other.rows

    def __add__(self, other):
        norm = self.field.norm
        return SquareMatrix([[norm(a + b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.field)

    def __sub__(self, other):
        norm = self.field.norm
        return SquareMatrix([[norm(a - b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.field)

    def __matmul__(self, other):
        norm = self.field.norm
        cols = list(zip(*other.rows))
        return SquareMatrix([[norm(sum(a * b for a, b in zip(r, c))) for c in cols] for r in self.rows], self.field)

    def transpose(self):
        return SquareMatrix(list(zip(*self.rows)), self.field)

    def is_skew(self) -> bool:
        return self.transpose() == SquareMatrix([[-v for v in r] for r in self.rows], self.field)

    def inverse(self) -> "SquareMatrix":
        if isinstance(self.field, PrimeField):
            return self._inverse_field()
        return self._inverse_fraction_free()

    def _inverse_fraction_free(self) -> "SquareMatrix":
        """Bareiss Gauss-Jordan on integer entries after clearing denominators."""
        n = self.n
        scale = lcm(*(Fraction(v).denominator for r in self.rows for v in r))
        aug = [[int(Fraction(v) * scale) for v in r] + [1 if i == j else 0 for j in range(n)]
               for i, r in enumerate(self.rows)]
        prev = 1
        for k in range(n):
            if aug[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if aug[i][k]), None)
                if swap is None:
                    raise SingularDenominator("matrix is singular")
                aug[k], aug[swap] = aug[swap], aug[k]
            piv = aug[k][k]
            for i in range(n):
                if i == k:
                    continue
                a = aug[i][k]
                row_i, row_k = aug[i], aug[k]
                for j in range(2 * n):
                    if j != k:
                        row_i[j] = (piv * row_i[j] - a * row_k[j]) // prev
                row_i[k] = 0
            prev = piv
        # All diagonal entries now equal the determinant of the scaled matrix.
        det = aug[n - 1][n - 1]
        return SquareMatrix([[Fraction(aug[i][n + j] * scale, det) for j in range(n)] for i in range(n)])

    def _inverse_field(self) -> "SquareMatrix":
        n, fld = self.n, self.field
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        for k in range(n):
            piv = next((i for i in range(k, n) if aug[i][k]), None)
            if piv is None:
                raise SingularDenominator("matrix is singular")
            aug[k], aug[piv] = aug[piv], aug[k]
            inv = fld.inv(aug[k][k])
            aug[k] = [fld.norm(v * inv) for v in aug[k]]
            for i in range(n):
                if i != k and aug[i][k]:
                    f = aug[i][k]
                    aug[i] = [fld.norm(x - f * y) for x, y in zip(aug[i], aug[k])]
        return SquareMatrix([r[n:] for r in aug], fld)

    def __repr__(self):
        return f"SquareMatrix({[[str(v) for v in r] for r in self.rows]})"


def classical_cayley(X: SquareMatrix) -> SquareMatrix:
    """X -> (I - X)(I + X)^{-1}."""
    I = SquareMatrix.identity(X.n, X.field)
    try:
        inv = (I + X).inverse()
    except SingularDenominator:
        raise SingularDenominator("I + X is singular (X has eigenvalue -1)") from None
    return (I - X) @ inv


# ---------------------------------------------------------------------------
# Known Cayley degrees


@dataclass(frozen=True)
class KnownResult:
    group: str
    kind: str  # "exact" or "upper-bound"
    value: int
    provenance: str

    def as_dict(self) -> dict:
        return {"group": self.group, "kind": self.kind, "value": self.value, "provenance": self.provenance}


CLASSIFICATION = "classification of Cayley simple groups"
SLN_PROJECTION = "SL_n torus map by projection from a point of X"
G2_PROJECTION = "G_2 torus map by linear projection of the quadric"
SPIN_ISOGENY = "Spin_n -> SO_n double cover"
PGL_ISOGENY = "isogeny SL_n/mu_d -> PGL_n"
SL4_EXAMPLE = "SL_4: projection bound with non-Cayley lower bound"

TABLE_MAX_N = 12


def known_table(max_n: int = TABLE_MAX_N) -> list:
    out = [
        KnownResult("SL_2", "exact", 1, CLASSIFICATION),
        KnownResult("SL_3", "exact", 1, CLASSIFICATION),
        KnownResult("SL_4", "exact", 2, SL4_EXAMPLE),
    ]
    out += [KnownResult(f"SL_{n}", "upper-bound", n - 2, SLN_PROJECTION) for n in range(5, max_n + 1)]
    out.append(KnownResult("G_2", "exact", 2, G2_PROJECTION))
    out += [KnownResult(f"Spin_{n}", "exact", 1 if n <= 5 else 2, SPIN_ISOGENY) for n in range(2, max_n + 1)]
    out += [KnownResult(f"SO_{n}", "exact", 1, CLASSIFICATION) for n in range(3, max_n + 1) if n != 4]
    out += [KnownResult(f"Sp_{2 * n}", "exact", 1, CLASSIFICATION) for n in range(1, max_n // 2 + 1)]
    out += [KnownResult(f"PGL_{n}", "exact", 1, CLASSIFICATION) for n in range(1, max_n + 1)]
    for n in range(2, max_n + 1):
        for d in range(2, n):
            if n % d:
                continue
            if n == 2 * d:
                out.append(KnownResult(f"SL_{n}/mu_{d}", "exact", 2 if d >= 3 else 1, PGL_ISOGENY))
            else:
                out.append(KnownResult(f"SL_{n}/mu_{d}", "upper-bound", n // d, PGL_ISOGENY))
    return out


def lookup(group: str, table=None) -> KnownResult:
    table = table or known_table(max(TABLE_MAX_N, _index_of(group)))
    for entry in table:
        if entry.group.lower() == group.lower():
            return entry
    raise KeyError(group)


def _index_of(group: str) -> int:
    digits = "".join(ch if ch.isdigit() else " " for ch in group).split()
    return max((int(d) for d in digits), default=0)


# ---------------------------------------------------------------------------
# Named candidates


def cayley_rank_one(name: str, fld=QQ) -> MapCandidate:
    """t -> (t - 1)/(t + 1) on a rank-1 torus with W = Z/2."""
    pair = builtin_pair(name)
    if pair.m != 1:
        raise BadParameter(f"{name} is not a rank-1 pair")
    (t,) = MultiPoly.gens(fld, 1)
    return MapCandidate(pair, (RatFunc(t - 1, t + 1),), name)


def squaring_isogeny_candidate(fld=QQ) -> MapCandidate:
    """The PGL_2 map precomposed with the degree-2 isogeny from SL_2."""
    return compose_with_isogeny(cayley_rank_one("pgl2", fld), IsogenySpec.scalar(1, 2),
                                source=builtin_pair("sl2"), name="sl2-sq-isogeny")


def named_candidate(name: str, p: int) -> MapCandidate:
    """pgl2, sl2, sl<n>, g2, sl2-sq-isogeny, product:<a>,<b> over F_p."""
    F = GF(p)
    name = name.strip().lower()
    if name.startswith("product:"):
        parts = name[len("product:"):].split(",")
        if len(parts) != 2:
            raise BadParameter(f"product needs two factors: {name!r}")
        return product_map(named_candidate(parts[0], p), named_candidate(parts[1], p), name=name)
    if name in ("pgl2", "sl2"):
        return cayley_rank_one(name, F)
    if name == "sl2-sq-isogeny":
        return squaring_isogeny_candidate(F)
    if name == "g2":
        return g2_candidate(F)
    if name.startswith("sl") and name[2:].isdigit():
        return sln_full_candidate(int(name[2:]), p, 1)
    raise BadParameter(f"unknown map {name!r}")
