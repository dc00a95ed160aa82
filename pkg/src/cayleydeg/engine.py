"""Candidate equivariant maps T -> t: verification and degree computation.

A :class:`MapCandidate` is an m-tuple of rational functions of the ambient
torus coordinates, read as ambient Lie coordinates of the image.  Degrees
come from two independent routes: line restriction through a projection
center (:func:`projection_degree`) and exhaustive fiber counting over a
prime field (:func:`brute_force_degree`).
"""
from __future__ import annotations

import logging
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    BadParameter,
    CapExceeded,
    DegenerateSpec,
    ExpressionTooLarge,
    FieldMismatch,
    PoleAtPoint,
    RankMismatch,
    Unstable,
)
from .exactfield import GF, PrimeField, find_prime_with_root, make_stream
from .polylab import MultiPoly, RatFunc, ratfunc_equal, squarefree_degree, univariate_restrict
from .weyltorus import (
    GroupClosure,
    SignedPermutation,
    TorusLiePair,
    act_on_lie,
    act_on_torus,
    product_pair,
    reduce_to_free,
)

log = logging.getLogger(__name__)

DEFAULT_DELTA = 0.02
DEFAULT_CAP = 20_000_000
SAMPLED_MIN_POINTS = 50
SAMPLED_MIN_PRIME = 10_000


@dataclass(frozen=True, eq=False)
class MapCandidate:
    pair: TorusLiePair
    components: tuple
    name: str = ""

    def __post_init__(self):
        comps = tuple(c if isinstance(c, RatFunc) else RatFunc(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.pair.m:
            raise BadParameter(f"{len(comps)} components for ambient dimension {self.pair.m}")
        if any(c.nvars != self.pair.m for c in comps):
            raise BadParameter("components must be functions of the ambient torus coordinates")
        if len({c.field for c in comps}) != 1:
            raise FieldMismatch("components over different fields")

    @property
    def field(self):
        return self.components[0].field

    @cached_property
    def reduced(self) -> tuple:
        """Components with dependent torus coordinates eliminated."""
        return tuple(reduce_to_free(c, self.pair, "torus") for c in self.components)

    @property
    def free_map(self) -> tuple:
        """The reduced map from free torus coordinates to independent Lie coordinates."""
        return tuple(self.reduced[i] for i in self.pair.lie_free)

    def max_degree(self) -> int:
        return max(c.degree() for c in self.reduced)

    def to_field(self, fld) -> "MapCandidate":
        if fld == self.field:
            return self
        return MapCandidate(self.pair, tuple(c.to_field(fld) for c in self.components), self.name)

    def evaluate_raw(self, free_values: Sequence) -> list:
        """Ambient image at a point given by raw free-coordinate values."""
        point = self.pair.lift(free_values, self.field)
        return [c.eval_raw(point) for c in self.components]


@dataclass(frozen=True)
class IsogenySpec:
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if any(len(row) != len(rows) for row in rows):
            raise BadParameter("isogeny exponent matrix must be square")
        if self.determinant == 0:
            raise BadParameter("isogeny exponent matrix must be nonsingular")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return _int_det(self.matrix)

    @property
    def kernel_order(self) -> int:
        return abs(self.determinant)

    @classmethod
    def scalar(cls, r: int, k: int) -> "IsogenySpec":
        return cls(tuple(tuple(k if i == j else 0 for j in range(r)) for i in range(r)))

    def direct_sum(self, other: "IsogenySpec") -> "IsogenySpec":
        a, b = self.rank, other.rank
        rows = [list(row) + [0] * b for row in self.matrix]
        rows += [[0] * a + list(row) for row in other.matrix]
        return IsogenySpec(tuple(map(tuple, rows)))


def _int_det(rows) -> int:
    M = [[Fraction(v) for v in row] for row in rows]
    n, det = len(M), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return int(det)


@dataclass
class DegreeReport:
    method: str
    degree: int
    samples: int
    prime: int
    histogram: dict | None = None
    sample_degrees: dict | None = None
    stable: bool = True
    delta: float | None = None

    def as_dict(self) -> dict:
        out = {"method": self.method, "degree": self.degree, "samples": self.samples, "prime": self.prime}
        if self.histogram is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
            out["delta"] = self.delta
        if self.sample_degrees is not None:
            out["sample_degrees"] = {str(k): v for k, v in sorted(self.sample_degrees.items())}
            out["stable"] = self.stable
        return out


@dataclass
class ElementCheck:
    element: SignedPermutation
    passed: bool
    witness: list | None = None


@dataclass
class EquivarianceReport:
    checks: list = field(default_factory=list)
    mode: str = "symbolic"
    primes: tuple = ()
    points: int = 0
    failure_bound: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


# ---------------------------------------------------------------------------
# Sampled identity checking


def _sampling_fields(fld) -> list:
    if isinstance(fld, PrimeField):
        return [fld]
    p1 = find_prime_with_root(1, SAMPLED_MIN_PRIME)
    p2 = find_prime_with_root(1, p1 + 1)
    return [GF(p1), GF(p2)]


def _random_free_point(pair: TorusLiePair, fld, rng: random.Random) -> list:
    out = []
    for _ in pair.free:
        v = 0
        while v == 0:
            v = fld.random_raw(rng)
        out.append(v)
    return out


def _sampled_equal(lhs: Sequence[RatFunc], rhs: Sequence[RatFunc], pair: TorusLiePair, rng, points: int):
    """Compare two component tuples at random torus points.

    Returns (passed, witness, primes, bound) where bound is the Schwartz-Zippel
    probability of accepting a false identity."""
    fields = _sampling_fields(lhs[0].field)
    deg = max(a.degree() + b.degree() for a, b in zip(lhs, rhs))
    # Lifting through Laurent dependencies multiplies degrees by at most this.
    spread = max((sum(abs(k) for k in e) for e in pair.torus_deps.values()), default=1)
    deg *= max(spread, 1)
    bound = 1.0
    for fld in fields:
        L = [c.to_field(fld) for c in lhs]
        R = [c.to_field(fld) for c in rhs]
        done = tries = 0
        while done < points:
            tries += 1
            if tries > 20 * points:
                raise PoleAtPoint("could not find enough regular sample points")
            free = _random_free_point(pair, fld, rng)
            amb = pair.lift(free, fld)
            try:
                a = [c.eval_raw(amb) for c in L]
                b = [c.eval_raw(amb) for c in R]
            except PoleAtPoint:
                continue
            done += 1
            if a != b:
                return False, free, tuple(f.p for f in fields), 0.0
        bound *= min(1.0, deg / fld.p) ** points
    return True, None, tuple(f.p for f in fields), bound


# ---------------------------------------------------------------------------
# Verification


def check_target_containment(c: MapCandidate, *, rng: random.Random | None = None) -> bool:
    """Every Lie dependency holds identically on the image of T."""
    rng = rng or make_stream(0)
    for d, coeffs in c.pair.lie_deps.items():
        expr = c.components[d]
        for j, a in enumerate(coeffs):
            if a:
                expr = expr - c.components[j] * a
        try:
            if not reduce_to_free(expr, c.pair, "torus").is_zero():
                return False
        except ExpressionTooLarge:
            log.info("containment for %s: falling back to sampled mode", c.name)
            zero = RatFunc.constant(c.field, c.pair.m, 0)
            ok, *_ = _sampled_equal([expr], [zero], c.pair, rng, SAMPLED_MIN_POINTS)
            if not ok:
                return False
    return True


def _equivariance_sides(c: MapCandidate, g: SignedPermutation):
    torus_side = act_on_torus(g, c.components)
    lie_side = act_on_lie(g, c.components)
    return torus_side, lie_side


def check_equivariance(c: MapCandidate, elements, *, rng: random.Random | None = None,
                       sampled_points: int = SAMPLED_MIN_POINTS) -> EquivarianceReport:
    """Check c(g.t) == g.c(t) on T for every g, symbolically when possible."""
    rng = rng or make_stream(0)
    elements = list(elements.elements if isinstance(elements, GroupClosure) else elements)
    report = EquivarianceReport()
    sampled = []
    for g in elements:
        if g.size != c.pair.m:
            raise BadParameter(f"element {g} does not act on {c.pair.name}")
        torus_side, lie_side = _equivariance_sides(c, g)
        try:
            ok = all(
                ratfunc_equal(reduce_to_free(a, c.pair, "torus"), reduce_to_free(b, c.pair, "torus"))
                for a, b in zip(torus_side, lie_side)
            )
        except ExpressionTooLarge:
            sampled.append(len(report.checks))
            ok, witness, primes, bound = _sampled_equal(torus_side, lie_side, c.pair, rng, sampled_points)
            report.mode = "sampled"
            report.primes = primes
            report.points = sampled_points
            report.failure_bound = max(report.failure_bound, bound)
            report.checks.append(ElementCheck(g, ok, witness))
            continue
        witness = None if ok else _find_witness(torus_side, lie_side, c.pair, rng)
        report.checks.append(ElementCheck(g, ok, witness))
    return report


def _find_witness(lhs, rhs, pair, rng, tries: int = 2000):
    fld = lhs[0].field
    if not isinstance(fld, PrimeField):
        fld = _sampling_fields(fld)[0]
        lhs = [c.to_field(fld) for c in lhs]
        rhs = [c.to_field(fld) for c in rhs]
    for _ in range(tries):
        free = _random_free_point(pair, fld, rng)
        amb = pair.lift(free, fld)
        try:
            if [c.eval_raw(amb) for c in lhs] != [c.eval_raw(amb) for c in rhs]:
                return {"prime": fld.p, "free_point": free}
        except PoleAtPoint:
            continue
    return None


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    M = [list(r) for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        for i in range(len(M)):
            if i != rank and M[i][col] % p:
                f = M[i][col] * inv % p
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def check_dominance(c: MapCandidate, p: int, trials: int = 20, *, rng: random.Random | None = None) -> bool:
    """Positive certificate only: a sampled point where the Jacobian of the
    reduced free-coordinate map has full rank."""
    if trials < 1:
        raise BadParameter("trials must be >= 1")
    if p <= 2 * c.max_degree():
        raise BadParameter(f"prime {p} too small for degree {c.max_degree()}")
    rng = rng or make_stream(0)
    fld = GF(p)
    cf = c.to_field(fld)
    free = cf.pair.free
    fmap = cf.free_map
    parts = [(f.num, f.den, [f.num.partial_derivative(v) for v in free], [f.den.partial_derivative(v) for v in free])
             for f in fmap]
    for _ in range(trials):
        vals = _random_free_point(cf.pair, fld, rng)
        point = [0] * cf.pair.m
        for i, v in zip(free, vals):
            point[i] = v
        rows = []
        for num, den, dnum, dden in parts:
            D = den.eval_raw(point)
            if D == 0:
                break
            N = num.eval_raw(point)
            inv2 = pow(D * D, -1, p)
            rows.append([(a.eval_raw(point) * D - N * b.eval_raw(point)) * inv2 % p for a, b in zip(dnum, dden)])
        else:
            if _rank_mod_p(rows, p) == cf.pair.r:
                return True
    return False


# ---------------------------------------------------------------------------
# Degree by projection


@dataclass(frozen=True, eq=False)
class ProjectionSpec:
    """Projection of the hypersurface {F = 0} onto {L = 0} from a center.

    Exactly one of ``center`` (a point on the hypersurface) and ``direction``
    (a point at infinity) is given."""

    F: MultiPoly
    hyperplane: tuple
    center: tuple | None = None
    direction: tuple | None = None

    def __post_init__(self):
        fld = self.F.field
        L = tuple(fld.coerce(v) for v in self.hyperplane)
        object.__setattr__(self, "hyperplane", L)
        if len(L) != self.F.nvars or not any(L):
            raise BadParameter("hyperplane must be a nonzero linear form on the ambient space")
        if (self.center is None) == (self.direction is None):
            raise BadParameter("give exactly one of center and direction")
        pt = self.center if self.center is not None else self.direction
        pt = tuple(fld.coerce(v) for v in pt)
        if self.center is not None:
            object.__setattr__(self, "center", pt)
            if self.F.eval_raw(pt) != 0:
                raise BadParameter("center does not lie on the hypersurface")
        else:
            object.__setattr__(self, "direction", pt)
        if fld.norm(sum(a * b for a, b in zip(L, pt))) == 0:
            raise BadParameter("center lies on the target hyperplane")

    def to_field(self, fld) -> "ProjectionSpec":
        if fld == self.F.field:
            return self
        conv = lambda v: None if v is None else tuple(fld.coerce(Fraction(x)) for x in v)  # noqa: E731
        return ProjectionSpec(self.F.to_field(fld), conv(self.hyperplane), conv(self.center), conv(self.direction))


def _random_target(spec: ProjectionSpec, fld, rng) -> list:
    L = spec.hyperplane
    k = next(i for i, a in enumerate(L) if a)
    q = [fld.random_raw(rng) for _ in L]
    rest = sum(a * v for i, (a, v) in enumerate(zip(L, q)) if i != k)
    q[k] = fld.norm(-rest * fld.inv(L[k]))
    return q


def _fiber_count(spec: ProjectionSpec, q: list) -> int:
    fld = spec.F.field
    if spec.center is not None:
        c = spec.center
        g = univariate_restrict(spec.F, c, [fld.norm(a - b) for a, b in zip(q, c)])
        if g.is_zero():
            raise DegenerateSpec("line through the center lies on the hypersurface")
        g, _ = g.strip_zero_root()
    else:
        g = univariate_restrict(spec.F, q, spec.direction)
        if g.is_zero():
            raise DegenerateSpec("line in the projection direction lies on the hypersurface")
    if g.degree() < 1:
        return 0
    return squarefree_degree(g)


def projection_degree(spec: ProjectionSpec, p: int, samples: int = 20, *,
                      rng: random.Random | None = None) -> DegreeReport:
    """Generic number of points of the hypersurface over a target point."""
    if samples < 10:
        raise BadParameter("need at least 10 samples")
    if spec.F.degree() <= 1:
        raise DegenerateSpec("hypersurface is a hyperplane")
    rng = rng or make_stream(0)
    fld = GF(p) if p else spec.F.field
    spec = spec.to_field(fld)
    counts: Counter = Counter()
    budget = samples
    while True:
        while sum(counts.values()) < budget:
            q = _random_target(spec, fld, rng)
            if spec.F.eval_raw(q) == 0:
                continue
            counts[_fiber_count(spec, q)] += 1
        ranked = counts.most_common()
        if len(ranked) == 1 or ranked[0][1] > ranked[1][1]:
            break
        if budget >= 8 * samples:
            raise Unstable(f"no modal degree after {budget} samples: {dict(counts)}")
        budget *= 2
    degree = ranked[0][0]
    return DegreeReport("structural-projection", degree, sum(counts.values()), p,
                        sample_degrees=dict(counts), stable=len(counts) == 1)


# ---------------------------------------------------------------------------
# Degree by exhaustive fiber counting


def _coefficient_tensor(poly: MultiPoly, axes: Sequence[int], p: int) -> np.ndarray:
    shape = [max(poly.degree_in(i), 0) + 1 for i in axes]
    C = np.zeros(shape, dtype=np.int64)
    for e, c in poly.terms.items():
        C[tuple(e[i] for i in axes)] = c % p
    return C


class _GridEvaluator:
    """Evaluate polynomials in the free variables on the grid (F_p^*)^r."""

    def __init__(self, axes: Sequence[int], p: int):
        self.axes = list(axes)
        self.p = p
        self.values = np.arange(1, p, dtype=np.int64)

    def powers(self, values: np.ndarray, d: int) -> np.ndarray:
        V = np.ones((len(values), d + 1), dtype=np.int64)
        for k in range(1, d + 1):
            V[:, k] = V[:, k - 1] * values % self.p
        return V

    def evaluate(self, poly: MultiPoly, first_axis: np.ndarray) -> np.ndarray:
        p = self.p
        C = _coefficient_tensor(poly, self.axes, p)
        if max(C.shape) * (p - 1) ** 2 >= 2**62:
            raise BadParameter(f"prime {p} too large for int64 grid evaluation")
        T = np.tensordot(self.powers(first_axis, C.shape[0] - 1), C, axes=([1], [0])) % p
        for k in range(1, len(self.axes)):
            V = self.powers(self.values, C.shape[k] - 1)
            T = np.tensordot(T, V, axes=([1], [1])) % p
        return T


def brute_force_degree(c: MapCandidate, p: int, cap: int = DEFAULT_CAP, *, delta: float = DEFAULT_DELTA,
                       workers: int = 1, chunk_points: int = 1 << 21) -> DegreeReport:
    """Fiber-size histogram of the reduced map over all of (F_p^*)^r."""
    r = c.pair.r
    total = (p - 1) ** r
    if total > cap:
        raise CapExceeded(f"(p-1)^r = {total} exceeds cap {cap}; use projection_degree")
    fld = GF(p)
    cf = c.to_field(fld)
    axes = cf.pair.free
    ev = _GridEvaluator(axes, p)
    inv_table = np.zeros(p, dtype=np.int64)
    inv_table[1:] = [pow(v, -1, p) for v in range(1, p)]

    # Undefined wherever any component denominator vanishes.
    dens: list = []
    for f in cf.reduced:
        if not any(f.den == d for d in dens):
            dens.append(f.den)
    fmap = cf.free_map
    nbins = p ** r
    use_bincount = nbins <= 50_000_000
    rows_per_chunk = max(1, chunk_points // max((p - 1) ** (r - 1), 1))
    starts = list(range(0, p - 1, rows_per_chunk))

    def run_chunk(start):
        first = ev.values[start:start + rows_per_chunk]
        mask = np.ones((len(first),) + (p - 1,) * (r - 1), dtype=bool)
        for d in dens:
            mask &= ev.evaluate(d, first) != 0
        key = np.zeros(mask.shape, dtype=np.int64)
        for f in fmap:
            num = ev.evaluate(f.num, first)
            den = ev.evaluate(f.den, first)
            key = key * p + num * inv_table[den] % p
        keys = key[mask]
        if use_bincount:
            return np.bincount(keys, minlength=nbins)
        return keys

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run_chunk, starts))
    else:
        parts = [run_chunk(s) for s in starts]
    if use_bincount:
        fibers = np.sum(parts, axis=0)
        fibers = fibers[fibers > 0]
    else:
        _, fibers = np.unique(np.concatenate(parts), return_counts=True)
    defined = int(fibers.sum())
    hist_arr = np.bincount(fibers)
    histogram = {int(k): int(v) for k, v in enumerate(hist_arr) if v}
    nonempty = sum(histogram.values())
    generic = [k for k, v in histogram.items() if v / nonempty > delta]
    if not generic:
        raise Unstable("no fiber size exceeds the frequency threshold")
    return DegreeReport("brute-force-histogram", max(generic), defined, p, histogram=histogram, delta=delta)


# ---------------------------------------------------------------------------
# Composition


def intertwines(iso: IsogenySpec, source: TorusLiePair, target: TorusLiePair) -> bool:
    """E commutes with every generator's action on the free character lattice."""
    if len(source.generators) != len(target.generators):
        return False
    E = iso.matrix
    for gs, gt in zip(source.generators, target.generators):
        A = source.free_action_matrix(gs)
        B = target.free_action_matrix(gt)
        # Monomial maps compose by matrix product: E o g_source == g_target o E.
        if _matmul(A, E) != _matmul(E, B):
            return False
    return True


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def compose_with_isogeny(c: MapCandidate, iso: IsogenySpec, source: TorusLiePair | None = None,
                         name: str | None = None) -> MapCandidate:
    """Precompose c with the monomial torus map t_i -> prod_j t_j^E_ij."""
    source = source or c.pair
    if iso.rank != c.pair.r or iso.rank != source.r or source.m != c.pair.m:
        raise RankMismatch(f"isogeny of rank {iso.rank} on pairs of rank {source.r}/{c.pair.r}")
    if not intertwines(iso, source, c.pair):
        raise BadParameter("isogeny does not intertwine the Weyl actions")
    free = c.pair.free
    images = [[0] * c.pair.m for _ in range(c.pair.m)]
    for i, fi in enumerate(free):
        for j, fj in enumerate(source.free):
            images[fi][fj] = iso.matrix[i][j]
    comps = tuple(f.laurent_substitute(images) for f in c.reduced)
    return MapCandidate(source, comps, name or f"{c.name}*iso{iso.kernel_order}")


def product_map(c1: MapCandidate, c2: MapCandidate, name: str | None = None) -> MapCandidate:
    pair = product_pair(c1.pair, c2.pair)
    if c1.field != c2.field:
        raise FieldMismatch("product of candidates over different fields")
    comps = tuple(f.embed(pair.m, 0) for f in c1.components) + tuple(f.embed(pair.m, c1.pair.m) for f in c2.components)
    return MapCandidate(pair, comps, name or f"{c1.name}x{c2.name}")

