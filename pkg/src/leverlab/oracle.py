"""Consistency oracle: fabricate a private side for any public key.

Given (C_1..C_n, M) the oracle invents value sequence, base and exponents
that reproduce every C_i, proving the exponent assignment is not determined
by public data.  Results are stored so repeat queries answer identically;
the companion forger builds exponent assignments whose x/y sums cancel by
construction.
"""

from dataclasses import dataclass
import os
import threading

from .coprime import gen_coprime_sequence
from .errors import GenerationExhausted, InvalidKeyMaterial
from .numtheory import discrete_log, factorize, find_generator, mod_inv, mod_pow
from .scheme import PublicKey


@dataclass(frozen=True)
class OracleRecord:
    """A stored answer: exponents in [1, M-1] plus the fabricated side."""

    C: tuple
    M: int
    ell: tuple
    A: tuple
    W: int

    def verify(self):
        if len(set(self.ell)) != len(self.ell):
            raise InvalidKeyMaterial("oracle record with repeated exponents")
        if any(not 1 <= v <= self.M - 1 for v in self.ell):
            raise InvalidKeyMaterial("oracle exponent outside [1, M-1]")
        for c, a, e in zip(self.C, self.A, self.ell):
            if a * mod_pow(self.W, e, self.M) % self.M != c:
                raise InvalidKeyMaterial("oracle record fails the key transform")
        return self


def _record_line(rec: OracleRecord) -> str:
    return " ".join(
        [
            "v1",
            "M", str(rec.M),
            "C", ",".join(str(c) for c in rec.C),
            "W", str(rec.W),
            "A", ",".join(str(a) for a in rec.A),
            "ell", ",".join(str(v) for v in rec.ell),
        ]
    )


def _parse_record(line: str) -> OracleRecord:
    tok = line.split()
    if len(tok) != 11 or tok[0] != "v1" or tok[1::2][:5] != ["M", "C", "W", "A", "ell"]:
        raise InvalidKeyMaterial(f"bad oracle record {line!r}")
    ints = lambda s: tuple(int(v) for v in s.split(","))
    return OracleRecord(
        C=ints(tok[4]), M=int(tok[2]), ell=ints(tok[10]), A=ints(tok[8]),
        W=int(tok[6]),
    )


class OracleDatabase:
    """Append-only store keyed by the exact ordered C-sequence and M.

    With a path, records replay from disk on open and every new record is
    appended and flushed; without one the store is memory-only.  A single
    lock serializes lookup-or-create so concurrent queries for the same key
    observe one record.
    """

    def __init__(self, path=None):
        self.path = path
        self._lock = threading.Lock()
        self._records = {}
        if path and os.path.exists(path):
            with open(path, "r", encoding="ascii") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rec = _parse_record(line).verify()
                        self._records[(rec.C, rec.M)] = rec

    def __len__(self):
        return len(self._records)

    def lookup(self, C, M):
        with self._lock:
            return self._records.get((tuple(C), int(M)))

    def get_or_create(self, C, M, maker):
        key = (tuple(C), int(M))
        with self._lock:
            rec = self._records.get(key)
            if rec is not None:
                return rec
            rec = maker().verify()
            self._records[key] = rec
            if self.path:
                with open(self.path, "a", encoding="ascii") as fh:
                    fh.write(_record_line(rec) + "\n")
                    fh.flush()
            return rec


def lever_oracle(pub: PublicKey, db: OracleDatabase, rng, P=None) -> OracleRecord:
    """Answer with a fabricated (A, W, exponents) consistent with pub.

    Repeat queries for the byte-identical public key return the stored
    record; a permuted C-order is a different key and gets fresh randomness.
    """
    P = pub.P if P is None else P
    m = int(pub.M)
    n = pub.n

    def maker():
        group = factorize(m - 1)
        for _ in range(200):
            seq = gen_coprime_sequence(n, P, rng, odd_only=False)
            if seq.product >= m:
                continue
            ratios = [pub.C[i] * mod_inv(seq[i], m) % m for i in range(n)]
            if len(set(ratios)) == n:
                break
        else:
            raise GenerationExhausted("no usable fabricated sequence")
        w = find_generator(m, group, rng)
        ell = tuple(
            discrete_log(r, w, m, group) or m - 1  # exponent 0 reads as M-1
            for r in ratios
        )
        return OracleRecord(C=tuple(pub.C), M=m, ell=ell, A=seq.values, W=w)

    return db.get_or_create(pub.C, m, maker)


@dataclass(frozen=True)
class Forgery:
    """Alternative exponent assignment whose x-sum equals its y-sum mod M-1,
    with the y-side A-values chosen by the caller."""

    x_indices: tuple
    y_indices: tuple
    A_x: tuple
    A_y: tuple
    ell_x: tuple
    ell_y: tuple
    W: int
    M: int

    def verify(self):
        mbar = self.M - 1
        if sum(self.ell_x) % mbar != sum(self.ell_y) % mbar:
            raise InvalidKeyMaterial("forgery sum congruence fails")
        return self


def forge_representation(pub: PublicKey, x_indices, y_indices, A_y_choice, rng) -> Forgery:
    """Build exponents/values matching C on x- and y-positions with equal
    exponent sums, the y-side values being exactly the caller's choice."""
    xs = tuple(x_indices)
    ys = tuple(y_indices)
    n = pub.n
    if not xs or not ys:
        raise ValueError("want at least one index on each side")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys) or set(xs) & set(ys):
        raise ValueError("index sides must be disjoint and duplicate-free")
    if any(not 1 <= i <= n for i in xs + ys):
        raise ValueError(f"indices must lie in [1, {n}]")
    ay = tuple(A_y_choice)
    if len(ay) != len(ys):
        raise ValueError("one y-side value per y-index required")
    if any(not 2 <= a <= pub.P for a in ay):
        raise ValueError(f"y-side values must lie in [2, {pub.P}]")

    m = int(pub.M)
    mbar = m - 1
    group = factorize(mbar)
    w = find_generator(m, group, rng)
    ell_y = tuple(
        discrete_log(pub.C[y - 1] * mod_inv(a, m) % m, w, m, group) or mbar
        for y, a in zip(ys, ay)
    )
    target = sum(ell_y) % mbar
    for _ in range(200):
        head = [rng.randrange(1, mbar + 1) for _ in xs[:-1]]
        last = (target - sum(head)) % mbar or mbar
        ell_x = tuple(head + [last])
        a_x = tuple(
            pub.C[x - 1] * mod_pow(w, -e, m) % m for x, e in zip(xs, ell_x)
        )
        if all(a > 1 for a in a_x):
            return Forgery(xs, ys, a_x, ay, ell_x, ell_y, w, m).verify()
    raise GenerationExhausted("could not keep all x-side values above 1")
