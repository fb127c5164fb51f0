"""Pairwise-compatible integer sequences and subset products over bit blocks.

A valid sequence allows a pair to share a common factor F only if neither
quotient value/F divides any other member; with full pairwise coprimality
as the common special case.  Subset products are what the encryptor ships.
"""

from dataclasses import dataclass
from math import gcd, prod

from .errors import GenerationExhausted, ShapeError


def coprime_sequence_violation(values):
    """Reason string for the first rule violation, or None if clean.

    A pair with gcd F > 1 is tolerated only while neither quotient
    member/F divides any third member (vacuously true for n <= 2; note a
    quotient of 1 divides everything, so divisibility between members is
    fatal once a third member exists).
    """
    n = len(values)
    if any(v < 1 for v in values):
        return "members must be positive"
    if len(set(values)) != n:
        return "members must be distinct"
    for i in range(n):
        for j in range(i + 1, n):
            f = gcd(values[i], values[j])
            if f == 1:
                continue
            qi, qj = values[i] // f, values[j] // f
            for k in range(n):
                if k in (i, j):
                    continue
                if values[k] % qi == 0:
                    return (
                        f"members {i} and {j} share factor {f} but "
                        f"{values[i]}/{f} divides member {k}"
                    )
                if values[k] % qj == 0:
                    return (
                        f"members {i} and {j} share factor {f} but "
                        f"{values[j]}/{f} divides member {k}"
                    )
    return None


def is_coprime_sequence(values) -> bool:
    return coprime_sequence_violation(values) is None


@dataclass(frozen=True)
class CoprimeSequence:
    """Validated sequence; bound, when given, caps every member."""

    values: tuple
    bound: int = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        reason = coprime_sequence_violation(self.values)
        if reason is not None:
            raise ValueError(reason)
        if self.bound is not None and any(v > self.bound for v in self.values):
            raise ValueError(f"member exceeds bound {self.bound}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def product(self):
        return prod(self.values)


def gen_coprime_sequence(n, P, rng, odd_only=True) -> CoprimeSequence:
    """Random pairwise-coprime sequence from {2..P} (odd members by default).

    Pairwise coprimality is stricter than the full pair rule but always
    satisfies it; generation greedily accepts values in a shuffled order and
    restarts on dead ends.  Raises GenerationExhausted when the pool is too
    thin (e.g. more odd slots requested than fit below P).
    """
    if n < 1 or P < 2:
        raise ValueError("want n >= 1 and P >= 2")
    pool = [v for v in range(2, P + 1) if v % 2 or not odd_only]
    for _ in range(200):
        if len(pool) < n:
            break
        chosen = []
        for v in rng.sample(pool, len(pool)):
            if all(gcd(v, c) == 1 for c in chosen):
                chosen.append(v)
                if len(chosen) == n:
                    rng.shuffle(chosen)
                    return CoprimeSequence(tuple(chosen), bound=P)
    raise GenerationExhausted(f"no valid sequence of {n} members below {P}")


def subset_product(values, bits, M=None):
    """Product of values[i] with bits[i] set, optionally reduced mod M."""
    if len(bits) != len(values):
        raise ShapeError(f"{len(bits)} bits for {len(values)} members")
    out = 1
    for v, b in zip(values, bits):
        if b not in (0, 1):
            raise ShapeError(f"bit {b!r} is not 0/1")
        if b:
            out = out * v if M is None else out * v % int(M)
    return out


@dataclass(frozen=True)
class BitBlock:
    """Fixed-width plaintext block, most significant bit first."""

    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(self.bits))
        if not self.bits:
            raise ShapeError("empty block")
        if any(b not in (0, 1) for b in self.bits):
            raise ShapeError("bits must be 0/1")

    @classmethod
    def from_string(cls, text):
        if set(text) - {"0", "1"}:
            raise ShapeError(f"bad bit string {text!r}")
        return cls(tuple(int(c) for c in text))

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)


def iter_blocks(bitstring, width):
    """Split a 0/1 string into width-sized BitBlocks; length must divide."""
    if width < 1:
        raise ShapeError("want positive width")
    if len(bitstring) % width:
        raise ShapeError(f"length {len(bitstring)} not a multiple of {width}")
    return [BitBlock.from_string(bitstring[i : i + width]) for i in range(0, len(bitstring), width)]
