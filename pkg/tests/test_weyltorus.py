import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleydeg.errors import BadParameter, CapExceeded
from cayleydeg.exactfield import QQ
from cayleydeg.polylab import MultiPoly, RatFunc, ratfunc_equal
from cayleydeg.weyltorus import (
    SignedPermutation,
    act_on_lie,
    act_on_torus,
    builtin_pair,
    close_group,
    g2_pair,
    reduce_to_free,
    sl_pair,
)

T = SignedPermutation.transposition
BUILTINS = ["sl(2)", "sl(3)", "sl(4)", "sl(5)", "g2", "sl2", "pgl2", "product(sl2,pgl2)", "product(sl(3),g2)"]


def test_closure_examples():
    assert len(close_group([T(3, 0, 1), T(3, 1, 2)])) == 6
    assert len(close_group([T(3, 0, 1), T(3, 1, 2), SignedPermutation.inversion(3)])) == 12
    assert len(close_group([SignedPermutation.identity(3)])) == 1
    with pytest.raises(CapExceeded):
        close_group([T(4, 0, 1), T(4, 1, 2), T(4, 2, 3)], cap=10)


def test_closure_is_deterministic_bfs():
    a = close_group([T(3, 0, 1), T(3, 1, 2)]).elements
    b = close_group([T(3, 0, 1), T(3, 1, 2)]).elements
    assert a == b and a[0].is_identity()
    assert a[1] == T(3, 0, 1) and a[2] == T(3, 1, 2)


@pytest.mark.parametrize("n", range(2, 7))
def test_sl_closure_orders(n):
    assert len(sl_pair(n).closure()) == math.factorial(n)


@pytest.mark.parametrize("name,order", [("g2", 12), ("sl2", 2), ("pgl2", 2), ("product(sl2,pgl2)", 4)])
def test_builtin_orders(name, order):
    assert len(builtin_pair(name).closure()) == order


def test_builtin_shapes():
    p = builtin_pair("sl(3)")
    assert (p.m, p.r) == (3, 2)
    assert p.torus_deps == {2: (-1, -1, 0)}
    prod = builtin_pair("product(sl2,pgl2)")
    assert (prod.m, prod.r) == (2, 2)
    with pytest.raises(BadParameter):
        builtin_pair("e8")


@pytest.mark.parametrize("name", BUILTINS)
def test_closure_closed_under_products_and_inverses(name):
    W = builtin_pair(name).closure()
    elems = set(W.elements)
    for g in W:
        assert g.inverse() in elems
        for h in list(W)[:8]:
            assert g * h in elems


def test_act_on_torus_examples():
    (t,) = MultiPoly.gens(QQ, 1)
    (out,) = act_on_torus(SignedPermutation.inversion(1), (RatFunc(t),))
    assert ratfunc_equal(out, 1 / RatFunc(t))
    y1, y2 = MultiPoly.gens(QQ, 2)
    (out,) = act_on_torus(T(2, 0, 1), (RatFunc(y1 + 2 * y2),))
    assert ratfunc_equal(out, RatFunc(y2 + 2 * y1))
    ys = MultiPoly.gens(QQ, 3)
    psi1 = RatFunc(-(ys[0] + 1), ys[0] - 1)
    (out,) = act_on_torus(SignedPermutation.inversion(3), (psi1,))
    assert ratfunc_equal(out, RatFunc(ys[0] + 1, ys[0] - 1))
    assert ratfunc_equal(out, -psi1)


def test_act_on_lie_examples():
    v = tuple(RatFunc(x) for x in MultiPoly.gens(QQ, 3))
    out = act_on_lie(SignedPermutation.inversion(3), v)
    assert all(ratfunc_equal(a, -b) for a, b in zip(out, v))
    assert act_on_lie(SignedPermutation.identity(3), v) == v
    assert act_on_lie(T(2, 0, 1), v[:2]) == (v[1], v[0])


def test_reduce_examples():
    pair = sl_pair(3)
    y1, y2, y3 = MultiPoly.gens(QQ, 3)
    assert reduce_to_free(y1 * y2 * y3 - 1, pair, "torus").is_zero()
    assert reduce_to_free(y1 + y2 + y3, pair, "lie").is_zero()
    assert ratfunc_equal(reduce_to_free(y3, pair, "torus"), RatFunc(MultiPoly.constant(QQ, 3, 1), y1 * y2))


@pytest.mark.parametrize("name", BUILTINS)
def test_inverse_action_roundtrip(name):
    pair = builtin_pair(name)
    ys = MultiPoly.gens(QQ, pair.m)
    phi = tuple(RatFunc(y + i + 1, y * ys[0] - 2) for i, y in enumerate(ys))
    for g in pair.closure():
        back = act_on_torus(g.inverse(), act_on_torus(g, phi))
        assert all(ratfunc_equal(a, b) for a, b in zip(back, phi))


@pytest.mark.parametrize("name", BUILTINS)
def test_generators_preserve_dependencies(name):
    pair = builtin_pair(name)
    for g in pair.generators:
        assert pair.preserves_dependencies(g)
        for rel in pair.torus_relations():
            assert reduce_to_free(act_on_torus(g, (rel,))[0], pair, "torus").is_zero()
        for rel in pair.lie_relations():
            moved = sum((c * v for c, v in zip(_coeffs(rel, pair.m), act_on_lie(g, MultiPoly.gens(QQ, pair.m)))),
                        MultiPoly.zero(QQ, pair.m))
            assert reduce_to_free(moved, pair, "lie").is_zero()


def _coeffs(linear: MultiPoly, m: int):
    return [linear.coefficient(tuple(int(i == j) for j in range(m))).value for i in range(m)]


@settings(max_examples=200)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(-9, 9), min_size=n - 1,
                                                                              max_size=n - 1))),
       st.data())
def test_lie_action_keeps_zero_sum(nc, data):
    n, cs = nc
    coeffs = cs + [-sum(cs)]
    g = data.draw(st.sampled_from(sl_pair(n).closure().elements))
    moved = act_on_lie(g, coeffs)
    assert sum(moved) == 0


def test_signed_permutation_action_law():
    # Substitution is contravariant: precomposing with g*h means g first, then h.
    W = g2_pair().closure().elements
    ys = MultiPoly.gens(QQ, 3)
    phi = tuple(RatFunc(y * 2 + i, y + 3) for i, y in enumerate(ys))
    for g in W[:6]:
        for h in W[:6]:
            lhs = act_on_torus(g * h, phi)
            rhs = act_on_torus(h, act_on_torus(g, phi))
            assert all(ratfunc_equal(a, b) for a, b in zip(lhs, rhs))
