"""Oracle and forgery tests: stored-answer stability plus sum congruences."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from leverlab.errors import InvalidKeyMaterial
from leverlab.oracle import (
    Forgery,
    OracleDatabase,
    OracleRecord,
    _parse_record,
    _record_line,
    forge_representation,
    lever_oracle,
)
from leverlab.reproduce import EXAMPLE1
from leverlab.scheme import PublicKey, keygen

# A=(3,5,7), W=2 (a generator mod 211), exponents 5,6,7
REC = OracleRecord(C=(96, 109, 52), M=211, ell=(5, 6, 7), A=(3, 5, 7), W=2)
LINE = "v1 M 211 C 96,109,52 W 2 A 3,5,7 ell 5,6,7"


def test_record_verify_accepts_consistent_side():
    assert REC.verify() is REC


@pytest.mark.parametrize(
    "ell", [(5, 6, 8), (5, 5, 6), (0, 6, 7), (5, 6, 211)]
)
def test_record_verify_rejects_bad_exponents(ell):
    rec = OracleRecord(C=REC.C, M=211, ell=ell, A=REC.A, W=2)
    with pytest.raises(InvalidKeyMaterial):
        rec.verify()


def test_record_line_roundtrip():
    assert _record_line(REC) == LINE
    assert _parse_record(LINE) == REC


@pytest.mark.parametrize(
    "line",
    [
        "v2 M 211 C 96,109,52 W 2 A 3,5,7 ell 5,6,7",
        "v1 M 211 C 96,109,52 W 2 A 3,5,7",
        "v1 N 211 C 96,109,52 W 2 A 3,5,7 ell 5,6,7",
        "garbage",
    ],
)
def test_parse_record_rejects_malformed_lines(line):
    with pytest.raises(InvalidKeyMaterial):
        _parse_record(line)


def test_db_caches_first_answer():
    db = OracleDatabase()
    calls = []

    def maker():
        calls.append(1)
        return REC

    a = db.get_or_create(REC.C, REC.M, maker)
    b = db.get_or_create(list(REC.C), REC.M, maker)
    assert a is b and len(calls) == 1 and len(db) == 1
    assert db.lookup(REC.C, REC.M) == REC
    assert db.lookup((1, 2, 3), REC.M) is None


def test_db_disk_replay_and_append(tmp_path):
    path = tmp_path / "oracle.db"
    db = OracleDatabase(str(path))
    db.get_or_create(REC.C, REC.M, lambda: REC)
    assert path.read_text() == LINE + "\n"

    again = OracleDatabase(str(path))
    assert len(again) == 1
    assert again.lookup(REC.C, REC.M) == REC

    other = OracleRecord(C=(96, 109, 13), M=211, ell=(5, 6, 1), A=(3, 5, 112), W=2)
    again.get_or_create(other.C, other.M, lambda: other)
    assert len(OracleDatabase(str(path))) == 2


def test_db_rejects_corrupt_store(tmp_path):
    path = tmp_path / "oracle.db"
    path.write_text(LINE + "\nnot a record\n")
    with pytest.raises(InvalidKeyMaterial):
        OracleDatabase(str(path))
    # a parseable line that breaks the transform is also refused
    path.write_text("v1 M 211 C 96,109,52 W 2 A 3,5,7 ell 5,6,9\n")
    with pytest.raises(InvalidKeyMaterial):
        OracleDatabase(str(path))


def test_lever_oracle_frozen_answer_and_stability():
    pub, _ = EXAMPLE1.build()
    db = OracleDatabase()
    rec = lever_oracle(pub, db, random.Random(11))
    assert rec.A == (2, 13, 9, 17, 7, 11)
    assert rec.W == 502292
    rec.verify()
    # repeat query, fresh rng: same stored record, nothing new minted
    assert lever_oracle(pub, db, random.Random(999)) is rec
    assert len(db) == 1


def test_lever_oracle_permuted_key_is_a_fresh_query():
    pub, _ = EXAMPLE1.build()
    perm = PublicKey(P=pub.P, mode=pub.mode, M=pub.M,
                     C=pub.C[::-1])
    db = OracleDatabase()
    rec = lever_oracle(pub, db, random.Random(11))
    rec2 = lever_oracle(perm, db, random.Random(11))
    assert len(db) == 2
    assert rec2.C == pub.C[::-1]
    assert (rec2.A, rec2.ell) != (rec.A, rec.ell)
    rec2.verify()


def test_lever_oracle_fabricated_side_shape():
    pub, priv = keygen(3, 13, mode="strict", rng=random.Random(3))
    m = int(pub.M)
    rec = lever_oracle(pub, OracleDatabase(), random.Random(7))
    assert len(set(rec.ell)) == 3
    assert all(1 <= e <= m - 1 for e in rec.ell)
    assert all(2 <= a <= 13 for a in rec.A)
    prod = 1
    for a in rec.A:
        prod *= a
    assert prod < m
    # the fabricated side is a different explanation of the same key
    assert (rec.A, rec.W) != (priv.A.values, priv.W)


def test_forge_frozen_example1():
    pub, _ = EXAMPLE1.build()
    f = forge_representation(pub, (2, 6), (5,), (3,), random.Random(1))
    assert f.A_y == (3,) and f.ell_y == (327648,)
    assert f.A_x == (52183, 436773)
    assert f.ell_x == (420618, 417960)
    assert sum(f.ell_x) % (f.M - 1) == sum(f.ell_y) % (f.M - 1)
    for i, a, e in zip(f.x_indices, f.A_x, f.ell_x):
        assert a * pow(f.W, e, f.M) % f.M == pub.C[i - 1]
    for i, a, e in zip(f.y_indices, f.A_y, f.ell_y):
        assert a * pow(f.W, e, f.M) % f.M == pub.C[i - 1]


def test_forge_is_deterministic_per_seed():
    pub, _ = EXAMPLE1.build()
    a = forge_representation(pub, (1, 3), (4,), (5,), random.Random(42))
    b = forge_representation(pub, (1, 3), (4,), (5,), random.Random(42))
    assert a == b


def test_forge_single_x_index():
    pub, _ = EXAMPLE1.build()
    f = forge_representation(pub, (1,), (2,), (5,), random.Random(9))
    assert len(f.ell_x) == 1
    assert f.ell_x[0] % (f.M - 1) == sum(f.ell_y) % (f.M - 1)
    assert f.A_x[0] > 1


@pytest.mark.parametrize(
    "xs,ys,ay",
    [
        ((), (5,), (3,)),
        ((2, 6), (), ()),
        ((2, 2), (5,), (3,)),
        ((2, 5), (5,), (3,)),
        ((2, 7), (5,), (3,)),
        ((2, 6), (5,), (3, 3)),
        ((2, 6), (5,), (1,)),
        ((2, 6), (5,), (18,)),
    ],
)
def test_forge_rejects_bad_requests(xs, ys, ay):
    pub, _ = EXAMPLE1.build()
    with pytest.raises(ValueError):
        forge_representation(pub, xs, ys, ay, random.Random(0))


def test_forgery_verify_guards_the_congruence():
    f = Forgery((1,), (2,), (3,), (5,), (7,), (8,), 2, 211)
    with pytest.raises(InvalidKeyMaterial):
        f.verify()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_forge_sum_congruence_always_holds(seed):
    rng = random.Random(f"forge-prop:{seed}")
    pub, _ = keygen(4, 13, mode="strict", rng=rng)
    idx = rng.sample(range(1, 5), 3)
    f = forge_representation(
        pub, tuple(idx[:2]), (idx[2],), (rng.randrange(2, 14),), rng
    )
    mbar = f.M - 1
    assert sum(f.ell_x) % mbar == sum(f.ell_y) % mbar
    assert all(a > 1 for a in f.A_x)
    assert all(1 <= e <= mbar for e in f.ell_x + f.ell_y)
