"""Sequence validation, generation, subset products, bit blocks."""

import random
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leverlab.coprime import (
    BitBlock,
    CoprimeSequence,
    coprime_sequence_violation,
    gen_coprime_sequence,
    is_coprime_sequence,
    iter_blocks,
    subset_product,
)
from leverlab.errors import GenerationExhausted, ShapeError


def test_validator_accepts():
    assert is_coprime_sequence((3, 5, 7))
    assert is_coprime_sequence((11, 10, 3, 7, 17, 13))
    assert is_coprime_sequence((5, 6, 7))
    assert is_coprime_sequence((437, 221, 77, 43, 37, 29, 41, 31, 15, 2))
    # shared factor tolerated when neither quotient divides a third member
    assert is_coprime_sequence((10, 15, 7))  # gcd 5, quotients 2 and 3
    assert is_coprime_sequence((4,))
    assert is_coprime_sequence(())


def test_validator_rejects():
    assert not is_coprime_sequence((6, 10, 15))  # 6/2=3 divides 15
    assert not is_coprime_sequence((3, 5, 3))  # repeat
    assert not is_coprime_sequence((3, 0, 7))
    assert not is_coprime_sequence((3, -5, 7))
    # divisibility between members: quotient 1 divides any third member
    assert not is_coprime_sequence((3, 15, 7))
    assert "distinct" in coprime_sequence_violation((2, 2))
    assert coprime_sequence_violation((3, 15, 7)) is not None


def test_validator_vacuous_small():
    # with only two members there is no third member to collide with
    assert is_coprime_sequence((3, 15))
    assert is_coprime_sequence((2, 4))


def test_sequence_dataclass():
    s = CoprimeSequence((3, 5, 7), bound=13)
    assert len(s) == 3 and list(s) == [3, 5, 7] and s[1] == 5
    assert s.product == 105
    with pytest.raises(ValueError):
        CoprimeSequence((3, 5, 7), bound=6)
    with pytest.raises(ValueError):
        CoprimeSequence((6, 10, 15))


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=3, max_value=60),
       st.integers())
def test_generation_is_pairwise_coprime(n, P, seed):
    rng = random.Random(seed)
    odd_below = sum(1 for v in range(3, P + 1) if v % 2)
    if odd_below < n:
        with pytest.raises(GenerationExhausted):
            gen_coprime_sequence(n, P, rng)
        return
    try:
        seq = gen_coprime_sequence(n, P, rng)
    except GenerationExhausted:
        return  # thin pools may legitimately run out (e.g. 3, 9, 27)
    assert len(seq) == n
    assert all(v % 2 and 3 <= v <= P for v in seq)
    assert all(
        gcd(a, b) == 1 for i, a in enumerate(seq) for b in seq.values[i + 1:]
    )


def test_generation_even_pool():
    # with evens allowed, some seed quickly produces one (at most a single
    # even member can appear in a pairwise-coprime draw)
    seqs = [
        gen_coprime_sequence(4, 20, random.Random(s), odd_only=False)
        for s in range(10)
    ]
    assert any(any(v % 2 == 0 for v in seq) for seq in seqs)
    for seq in seqs:
        assert all(2 <= v <= 20 for v in seq)
        assert sum(1 for v in seq if v % 2 == 0) <= 1


def test_generation_deterministic():
    a = gen_coprime_sequence(5, 30, random.Random(12)).values
    b = gen_coprime_sequence(5, 30, random.Random(12)).values
    assert a == b


def test_generation_validates_args():
    with pytest.raises(ValueError):
        gen_coprime_sequence(0, 10, random.Random(0))
    with pytest.raises(ValueError):
        gen_coprime_sequence(3, 1, random.Random(0))


def test_subset_product():
    values = (11, 10, 3, 7, 17, 13)
    assert subset_product(values, (0, 1, 0, 0, 0, 1)) == 130
    assert subset_product(values, (0, 0, 0, 0, 0, 0)) == 1
    assert subset_product(values, (1, 1, 1, 1, 1, 1)) == prod(values)
    assert subset_product(values, (0, 1, 0, 0, 0, 1), M=7) == 130 % 7
    with pytest.raises(ShapeError):
        subset_product(values, (1, 0))
    with pytest.raises(ShapeError):
        subset_product((3, 5), (1, 2))


@given(st.lists(st.integers(min_value=1, max_value=100), min_size=1, max_size=8),
       st.data())
def test_subset_product_matches_filter(values, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=len(values),
                              max_size=len(values)))
    want = prod(v for v, b in zip(values, bits) if b)
    assert subset_product(values, bits) == want
    assert subset_product(values, bits, M=97) == want % 97


def test_bitblock():
    b = BitBlock.from_string("010001")
    assert str(b) == "010001" and len(b) == 6 and list(b) == [0, 1, 0, 0, 0, 1]
    with pytest.raises(ShapeError):
        BitBlock.from_string("01a")
    with pytest.raises(ShapeError):
        BitBlock(())
    with pytest.raises(ShapeError):
        BitBlock((0, 2))


def test_iter_blocks():
    blocks = iter_blocks("010001101101", 6)
    assert [str(b) for b in blocks] == ["010001", "101101"]
    with pytest.raises(ShapeError):
        iter_blocks("0100", 3)
    with pytest.raises(ShapeError):
        iter_blocks("0100", 0)
