import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleydeg.errors import FieldMismatch, NoRoot, ZeroInversion
from cayleydeg.exactfield import (
    GF,
    QQ,
    field_inverse,
    find_prime_with_root,
    is_prime,
    make_stream,
    nth_root_of_unity,
    primitive_root,
    random_element,
)

from conftest import PRIMES


def test_inverse_examples():
    assert field_inverse(GF(13)(2)) == GF(13)(7)
    assert field_inverse(GF(101)(1)).value == 1
    assert field_inverse(QQ(1)).value == 1
    assert field_inverse(QQ(Fraction(-3, 4))).value == Fraction(-4, 3)
    with pytest.raises(ZeroInversion):
        field_inverse(GF(5)(0))
    with pytest.raises(ZeroInversion):
        field_inverse(QQ(0))


def test_roots_of_unity_examples():
    assert nth_root_of_unity(13, 3).value == 3
    assert nth_root_of_unity(211, 1).value == 1
    with pytest.raises(NoRoot):
        nth_root_of_unity(7, 4)


def test_find_prime_examples():
    assert find_prime_with_root(3, 10) == 13
    assert find_prime_with_root(1, 2) == 2
    assert find_prime_with_root(4, 10000) == 10009


def test_cross_field_rejected():
    with pytest.raises(FieldMismatch):
        GF(13)(2) + GF(11)(2)
    with pytest.raises(FieldMismatch):
        QQ(1) * GF(5)(1)


@given(st.integers(min_value=0, max_value=200_000))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_large():
    for p in (1_000_000_007, 2_147_483_647, 10**12 + 39):
        assert is_prime(p) == sympy.isprime(p)
    assert not is_prime(3_215_031_751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(1, 30), st.integers(2, 5000))
def test_find_prime_is_smallest(n, lo):
    p = find_prime_with_root(n, lo)
    assert p >= lo and p % n == 1 % n and sympy.isprime(p)
    assert not any(sympy.isprime(q) and q % n == 1 % n for q in range(lo, p))


@given(st.sampled_from([p for p in PRIMES if p > 2]))
def test_primitive_root_generates(p):
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


@settings(max_examples=200)
@given(st.integers(2, 24), st.integers(2, 3000))
def test_root_of_unity_is_primitive(n, lo):
    p = find_prime_with_root(n, lo)
    z = nth_root_of_unity(p, n)
    assert z ** n == 1
    for d in sympy.divisors(n)[:-1]:
        assert z ** d != 1


def _fields():
    return [QQ] + [GF(p) for p in PRIMES]


@pytest.mark.parametrize("fld", _fields(), ids=repr)
def test_field_axioms_10k_triples(fld):
    stream = make_stream(7)
    zero, one = fld.zero, fld.one
    for _ in range(10_000):
        a, b, c = (random_element(fld, stream) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a and a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inverse() == one


@settings(max_examples=300)
@given(st.fractions(max_denominator=10**6), st.fractions(max_denominator=10**6))
def test_rationals_stay_reduced(x, y):
    a, b = QQ(x), QQ(y)
    results = [a + b, a - b, a * b, a ** 3]
    if y != 0:
        results.append(a / b)
    for r in results:
        v = Fraction(r.value)
        assert v.denominator > 0
        assert math.gcd(abs(v.numerator), v.denominator) == 1
        # integers are normalized to int
        if v.denominator == 1:
            assert type(r.value) is int


@settings(max_examples=300)
@given(st.sampled_from(PRIMES), st.integers(), st.integers())
def test_residues_in_range(p, x, y):
    F = GF(p)
    for r in (F(x) + F(y), F(x) * F(y), F(x) - F(y)):
        assert 0 <= r.value < p


def test_stream_determinism():
    s1 = make_stream(42)
    s2 = make_stream(42)
    a = [random_element(GF(13), s1).value for _ in range(16)]
    b = [random_element(GF(13), s2).value for _ in range(16)]
    assert a == b
    c = [random_element(GF(10007), make_stream(1)).value for _ in range(16)]
    d = [random_element(GF(10007), make_stream(2)).value for _ in range(16)]
    assert c != d


def test_child_streams_independent_of_order():
    first = [make_stream(5, w).random() for w in range(4)]
    again = [make_stream(5, w).random() for w in reversed(range(4))][::-1]
    assert first == again
    assert len(set(first)) == 4


def test_rational_sampling_bounded():
    stream = random.Random(0)
    for _ in range(200):
        v = Fraction(random_element(QQ, stream).value)
        assert abs(v.numerator) <= 100 and v.denominator <= 100
