"""Maximal tori, their Lie algebras and Weyl groups in ambient coordinates.

A torus T of rank r sits inside ambient coordinates y_1..y_m; the m - r
dependent coordinates are Laurent monomials in the free ones.  The Lie
algebra t uses ambient coordinates x_1..x_m with dependent coordinates given
by linear forms.  Weyl elements are signed permutations: on T they send
y_i to y_{s(i)}^{e_i}, on t they send x_i to e_i * x_{s(i)}.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadParameter, CapExceeded
from .exactfield import QQ
from .polylab import MultiPoly, RatFunc, substitute


@dataclass(frozen=True)
class SignedPermutation:
    perm: tuple
    signs: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise BadParameter(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise BadParameter(f"bad sign vector {self.signs}")

    @property
    def size(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, m: int) -> "SignedPermutation":
        return cls(tuple(range(m)), (1,) * m)

    @classmethod
    def transposition(cls, m: int, i: int, j: int) -> "SignedPermutation":
        p = list(range(m))
        p[i], p[j] = j, i
        return cls(tuple(p), (1,) * m)

    @classmethod
    def inversion(cls, m: int) -> "SignedPermutation":
        return cls(tuple(range(m)), (-1,) * m)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Product with ``(g * h) . v == g . (h . v)`` for the vector action."""
        return SignedPermutation(
            tuple(other.perm[k] for k in self.perm),
            tuple(s * other.signs[k] for s, k in zip(self.signs, self.perm)),
        )

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.size
        for i, k in enumerate(self.perm):
            inv[k] = i
        return SignedPermutation(tuple(inv), tuple(self.signs[inv[j]] for j in range(self.size)))

    def is_identity(self) -> bool:
        return self == SignedPermutation.identity(self.size)

    def torus_images(self) -> list[list[int]]:
        """Exponent vectors: y_i -> y_{perm[i]} ** signs[i]."""
        out = []
        for k, s in zip(self.perm, self.signs):
            e = [0] * self.size
            e[k] = s
            out.append(e)
        return out

    def shifted(self, m: int, offset: int) -> "SignedPermutation":
        """Extend to m coordinates, acting on the block starting at offset."""
        perm = list(range(m))
        signs = [1] * m
        for i, (k, s) in enumerate(zip(self.perm, self.signs)):
            perm[offset + i] = offset + k
            signs[offset + i] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def __str__(self):
        cyc = "".join(f"{'-' if s < 0 else ''}{k + 1}" for k, s in zip(self.perm, self.signs))
        return f"[{cyc}]"


def act_on_torus(g: SignedPermutation, components: Sequence) -> tuple:
    """Precompose each component with g acting on the torus variables."""
    images = g.torus_images()
    return tuple(_rat(c).laurent_substitute(images) for c in components)


def act_on_lie(g: SignedPermutation, v: Sequence) -> tuple:
    """Apply g to a vector of Lie coordinates: entry i becomes e_i * v_{s(i)}."""
    return tuple(v[k] if s > 0 else -v[k] for k, s in zip(g.perm, g.signs))


def substitute_lie(g: SignedPermutation, f):
    """Precompose a function of Lie coordinates with g."""
    f = _rat(f)
    xs = MultiPoly.gens(f.field, f.nvars)
    return substitute(f, {i: xs[k] if s > 0 else -xs[k] for i, (k, s) in enumerate(zip(g.perm, g.signs))})


def _rat(f) -> RatFunc:
    return f if isinstance(f, RatFunc) else RatFunc(f)


@dataclass(frozen=True)
class GroupClosure:
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.elements


def close_group(generators: Sequence[SignedPermutation], cap: int = 100_000) -> GroupClosure:
    """BFS closure from the identity, generators tried in the given order."""
    if cap < 1:
        raise BadParameter("cap must be >= 1")
    if not generators:
        raise BadParameter("need at least one generator to know the ambient size")
    e = SignedPermutation.identity(generators[0].size)
    seen = {e: None}
    order = [e]
    queue = deque([e])
    while queue:
        h = queue.popleft()
        for g in generators:
            k = g * h
            if k not in seen:
                if len(order) >= cap:
                    raise CapExceeded(f"group closure exceeds {cap} elements")
                seen[k] = None
                order.append(k)
                queue.append(k)
    return GroupClosure(tuple(order))


@dataclass(frozen=True)
class TorusLiePair:
    """A torus and its Lie algebra in ambient coordinates, with Weyl generators.

    ``torus_deps`` maps a dependent index to its Laurent exponent vector over
    the ambient coordinates; ``lie_deps`` maps it to a coefficient vector.
    """

    name: str
    m: int
    r: int
    torus_deps: dict = field(default_factory=dict)
    lie_deps: dict = field(default_factory=dict)
    generators: tuple = ()

    def __post_init__(self):
        if self.m - len(self.torus_deps) != self.r or self.m - len(self.lie_deps) != self.r:
            raise BadParameter(f"{self.name}: {self.m} coordinates, rank {self.r} and dependency counts disagree")
        for d, e in self.torus_deps.items():
            if any(e[j] for j in self.torus_deps):
                raise BadParameter(f"{self.name}: torus dependency {d} uses a dependent coordinate")
        for d, c in self.lie_deps.items():
            if any(c[j] for j in self.lie_deps):
                raise BadParameter(f"{self.name}: Lie dependency {d} uses a dependent coordinate")
        for g in self.generators:
            if g.size != self.m:
                raise BadParameter(f"{self.name}: generator of size {g.size} on {self.m} coordinates")
            if not self.preserves_dependencies(g):
                raise BadParameter(f"{self.name}: generator {g} does not preserve the dependency locus")

    def __hash__(self):
        return hash((self.name, self.m, self.r, self.generators))

    @property
    def free(self) -> tuple:
        return tuple(i for i in range(self.m) if i not in self.torus_deps)

    @property
    def lie_free(self) -> tuple:
        return tuple(i for i in range(self.m) if i not in self.lie_deps)

    def torus_images(self) -> list[list[int]]:
        out = []
        for i in range(self.m):
            if i in self.torus_deps:
                out.append(list(self.torus_deps[i]))
            else:
                e = [0] * self.m
                e[i] = 1
                out.append(e)
        return out

    def lie_assignment(self, fld=QQ) -> dict:
        xs = MultiPoly.gens(fld, self.m)
        out = {}
        for i in range(self.m):
            if i in self.lie_deps:
                out[i] = MultiPoly.linear(fld, self.lie_deps[i])
            else:
                out[i] = xs[i]
        return out

    def torus_relations(self, fld=QQ) -> list[MultiPoly]:
        """y_d * y^(e-) - y^(e+) for each dependency y_d = y^e."""
        rels = []
        for d, e in self.torus_deps.items():
            pos = tuple(max(k, 0) for k in e)
            neg = [max(-k, 0) for k in e]
            neg[d] += 1
            rels.append(MultiPoly(fld, self.m, {tuple(neg): 1, pos: -1}))
        return rels

    def lie_relations(self, fld=QQ) -> list[MultiPoly]:
        rels = []
        for d, c in self.lie_deps.items():
            coeffs = [-Fraction(v) for v in c]
            coeffs[d] += 1
            rels.append(MultiPoly.linear(fld, coeffs))
        return rels

    def preserves_dependencies(self, g: SignedPermutation) -> bool:
        for rel in self.torus_relations():
            moved = act_on_torus(g, (rel,))[0]
            if not reduce_to_free(moved, self, "torus").is_zero():
                return False
        for rel in self.lie_relations():
            if not reduce_to_free(substitute_lie(g, rel), self, "lie").is_zero():
                return False
        return True

    def closure(self, cap: int = 100_000) -> GroupClosure:
        if not self.generators:
            return GroupClosure((SignedPermutation.identity(self.m),))
        return close_group(self.generators, cap)

    def lift(self, free_values: Sequence, fld) -> list:
        """Ambient raw torus coordinates from raw values of the free ones."""
        point = [0] * self.m
        for i, v in zip(self.free, free_values):
            point[i] = v
        for d, e in self.torus_deps.items():
            acc = 1
            for j, k in enumerate(e):
                if k > 0:
                    acc = acc * point[j] ** k
                elif k < 0:
                    acc = acc * fld.inv(point[j]) ** (-k)
            point[d] = fld.norm(acc)
        return point

    def free_action_matrix(self, g: SignedPermutation) -> list[list[int]]:
        """Integer matrix of g on the character lattice of the free coordinates:
        row i is the exponent vector (over free coordinates) of g acting on y_{free[i]}."""
        images = self.torus_images()
        rows = []
        for i in self.free:
            k, s = g.perm[i], g.signs[i]
            rows.append([s * images[k][j] for j in self.free])
        return rows


def reduce_to_free(f, pair: TorusLiePair, side: str) -> RatFunc:
    """Eliminate dependent coordinates, leaving a function of the free ones."""
    f = _rat(f)
    if side == "torus":
        return f.laurent_substitute(pair.torus_images())
    if side == "lie":
        return substitute(f, pair.lie_assignment(f.field))
    raise BadParameter(f"side must be 'torus' or 'lie', not {side!r}")


def sl_pair(n: int) -> TorusLiePair:
    """Torus y_1...y_n = 1 and Lie algebra x_1 + ... + x_n = 0, W = S_n."""
    if n < 2:
        raise BadParameter("sl(n) needs n >= 2")
    dep = [-1] * (n - 1) + [0]
    gens = tuple(SignedPermutation.transposition(n, i, i + 1) for i in range(n - 1))
    return TorusLiePair(f"sl({n})", n, n - 1, {n - 1: tuple(dep)}, {n - 1: tuple(dep)}, gens)


def g2_pair() -> TorusLiePair:
    base = sl_pair(3)
    gens = base.generators + (SignedPermutation.inversion(3),)
    return TorusLiePair("g2", 3, 2, base.torus_deps, base.lie_deps, gens)


def rank_one_pair(name: str) -> TorusLiePair:
    return TorusLiePair(name, 1, 1, {}, {}, (SignedPermutation.inversion(1),))


def product_pair(p1: TorusLiePair, p2: TorusLiePair) -> TorusLiePair:
    m = p1.m + p2.m

    def shift_deps(deps, offset, width):
        return {d + offset: (0,) * offset + tuple(e) + (0,) * (m - offset - width) for d, e in deps.items()}

    torus = {**shift_deps(p1.torus_deps, 0, p1.m), **shift_deps(p2.torus_deps, p1.m, p2.m)}
    lie = {**shift_deps(p1.lie_deps, 0, p1.m), **shift_deps(p2.lie_deps, p1.m, p2.m)}
    gens = tuple(g.shifted(m, 0) for g in p1.generators) + tuple(g.shifted(m, p1.m) for g in p2.generators)
    return TorusLiePair(f"product({p1.name},{p2.name})", m, p1.r + p2.r, torus, lie, gens)


def _split_args(s: str) -> list[str]:
    depth, start, out = 0, 0, []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(s[start:i].strip())
            start = i + 1
    out.append(s[start:].strip())
    return out


def builtin_pair(name: str) -> TorusLiePair:
    """sl(n) / sln, g2, sl2, pgl2 (rank-1 models), product(a,b)."""
    name = name.strip().lower()
    if name in ("sl2", "pgl2"):
        return rank_one_pair(name)
    if name == "g2":
        return g2_pair()
    if name.startswith("product(") and name.endswith(")"):
        args = _split_args(name[len("product("):-1])
        if len(args) != 2:
            raise BadParameter(f"product needs two factors: {name!r}")
        return product_pair(builtin_pair(args[0]), builtin_pair(args[1]))
    m = re.fullmatch(r"sl\(?(\d+)\)?", name)
    if m:
        return sl_pair(int(m.group(1)))
    raise BadParameter(f"unknown pair {name!r}")
