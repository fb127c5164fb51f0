"""Modular arithmetic kernel: powers, primality, factoring, logs, roots."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leverlab.errors import (
    BadFactorization,
    NoSolution,
    NotInvertible,
    SearchExhausted,
)
from leverlab.numtheory import (
    Factorization,
    Modulus,
    RootSet,
    discrete_log,
    element_order,
    factorize,
    find_generator,
    find_prime_in_progression,
    is_probable_prime,
    mod_inv,
    mod_pow,
    mod_roots,
    mvalue,
)


def test_modulus_basics():
    m = Modulus(211, prime=True)
    assert int(m) == 211 and m.mbar == 210
    assert mvalue(m) == mvalue(211) == 211
    with pytest.raises(ValueError):
        Modulus(1)
    with pytest.raises(ValueError):
        Modulus(221, prime=True)  # 13 * 17


def test_mod_pow_signed():
    assert mod_pow(2, 6, 211) == 64
    assert mod_pow(2, -6, 211) == mod_inv(64, 211)
    assert mod_pow(5, 0, 97) == 1
    with pytest.raises(NotInvertible):
        mod_pow(6, -1, 9)


def test_mod_inv():
    assert mod_inv(13, 211) == 65
    assert 13 * 65 % 211 == 1
    with pytest.raises(NotInvertible):
        mod_inv(6, 9)


def test_is_probable_prime_classification():
    primes = [2, 3, 5, 7, 211, 510529, 510931, 7351, 2**61 - 1]
    composites = [0, 1, 4, 341, 561, 1105, 510511, 2**67 - 1]
    assert all(is_probable_prime(p) for p in primes)
    assert not any(is_probable_prime(c) for c in composites)


@given(st.integers(min_value=2, max_value=5000))
def test_is_probable_prime_matches_trial_division(x):
    naive = all(x % d for d in range(2, x)) if x > 1 else False
    assert is_probable_prime(x) == naive


def test_factorize_known():
    assert factorize(510930).pairs == ((2, 1), (3, 2), (5, 1), (7, 1), (811, 1))
    assert factorize(1).pairs == ()
    assert factorize(2**10).pairs == ((2, 10),)
    assert factorize(7351 - 1).value == 7350


@given(st.integers(min_value=1, max_value=10**9))
def test_factorize_reconstructs(x):
    f = factorize(x)
    assert f.value == x
    assert all(is_probable_prime(p) for p in f.primes)


def test_factorization_validates():
    with pytest.raises(BadFactorization):
        Factorization(((4, 1),))
    with pytest.raises(BadFactorization):
        Factorization(((3, 1), (2, 1)))  # out of order
    with pytest.raises(BadFactorization):
        Factorization(((2, 0),))


def test_find_prime_in_progression():
    assert find_prime_in_progression(1, 105) == 107
    assert find_prime_in_progression(1, 510510) == 510529
    assert find_prime_in_progression(1225, 1225) == 7351
    assert find_prime_in_progression(1225, 1225) % 1225 == 1
    with pytest.raises(SearchExhausted):
        # 26, 51, 76 are all composite
        find_prime_in_progression(25, 25, max_candidates=3)


def test_element_order_and_generator():
    f = factorize(210)
    assert element_order(2, 211, f) == 210
    assert element_order(1, 211, f) == 1
    assert element_order(210, 211, f) == 2  # -1
    g = find_generator(211, f)
    assert element_order(g, 211, f) == 210
    assert find_generator(7, factorize(6)) == 3
    assert find_generator(5, factorize(4)) == 2
    assert find_generator(3, factorize(2)) == 2


def test_find_generator_random_path():
    f = factorize(210)
    g = find_generator(211, f, random.Random(9))
    assert element_order(g, 211, f) == 210


def test_group_factorization_must_match():
    with pytest.raises(BadFactorization):
        element_order(2, 211, factorize(6))


def test_discrete_log_known():
    f = factorize(210)
    assert discrete_log(64, 2, 211, f) == 6
    for x in [0, 1, 5, 77, 209]:
        assert discrete_log(pow(2, x, 211), 2, 211, f) == x


def test_discrete_log_outside_subgroup():
    f = factorize(210)
    # 2^2 = 4 generates the order-105 subgroup; a non-member must be refused
    h = pow(2, 2, 211)
    non_member = pow(2, 3, 211)
    with pytest.raises(NoSolution):
        discrete_log(non_member, h, 211, f)


@given(st.integers(min_value=0, max_value=209))
def test_discrete_log_roundtrip(x):
    f = factorize(210)
    assert discrete_log(pow(2, x, 211), 2, 211, f) == x


def test_mod_roots_known():
    f = factorize(6)
    r = mod_roots(2, 4, 7, f)
    assert r.roots == (2, 5) and r.total == 2 and not r.truncated
    r = mod_roots(3, 6, 7, f)
    assert r.roots == (3, 5, 6) and r.total == 3
    with pytest.raises(NoSolution):
        mod_roots(3, 2, 7, f)  # 2 is not a cube mod 7


def test_mod_roots_negative_exponent():
    f = factorize(6)
    r = mod_roots(-2, 4, 7, f)
    # W^-2 = 4 means W^2 = 4^-1 = 2: solutions 3 and 4
    assert r.roots == tuple(sorted(w for w in range(1, 7) if pow(w, -2, 7) == 4))


def test_mod_roots_cap():
    f = factorize(210)
    r = mod_roots(210, 1, 211, f, cap=8)
    assert r.total == 210 and len(r.roots) == 8 and r.truncated
    assert all(pow(w, 210, 211) == 1 for w in r.roots)


@settings(max_examples=60)
@given(
    st.sampled_from([11, 13, 101, 211, 257]),
    st.integers(min_value=-30, max_value=30).filter(bool),
    st.integers(min_value=1, max_value=10**6),
)
def test_mod_roots_agree_with_scan(p, e, yseed):
    y = yseed % (p - 1) + 1
    f = factorize(p - 1)
    want = sorted(w for w in range(1, p) if pow(w, e, p) == y)
    try:
        got = mod_roots(e, y, p, f, cap=p)
    except NoSolution:
        assert want == []
    else:
        assert list(got.roots) == want and got.total == len(want)


def test_rootset_shape():
    rs = RootSet((2, 5), 2, False)
    assert len(rs) == 2 and list(rs) == [2, 5]
