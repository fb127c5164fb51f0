"""Exact continued fractions, convergents, and the two approximation scans.

All comparisons are cross-multiplied integer arithmetic; no floats anywhere.
The Legendre scan finds convergents p/q with |num/den - p/q| < 1/(2^t q^2),
the denominator-jump scan finds indices with q_s * Delta < q_{s+1}.
"""

from dataclasses import dataclass
from math import gcd

# discriminant identifiers used in hits and attack reports
EQ2PRIME = "eq2prime"
EQ4 = "eq4"
EQ4PRIME = "eq4prime"
EQ4DOUBLEPRIME = "eq4doubleprime"
EQ5 = "eq5"


@dataclass(frozen=True)
class ContinuedFraction:
    """A rational num/den in lowest terms with its canonical quotient list."""

    numerator: int
    denominator: int
    quotients: tuple

    def __post_init__(self):
        if self.denominator <= 0 or self.numerator < 0:
            raise ValueError("want nonnegative numerator, positive denominator")
        if gcd(self.numerator, self.denominator) != 1:
            raise ValueError("not in lowest terms")
        q = self.quotients
        if any(a < 1 for a in q[1:]) or (len(q) > 1 and q[-1] < 2):
            raise ValueError("quotient list not canonical")
        p, s = _fold(q)
        if (p, s) != (self.numerator, self.denominator):
            raise ValueError("quotients do not reconstruct the value")


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int


@dataclass(frozen=True)
class DiscriminantHit:
    """One passing convergent, tagged with the test that admitted it."""

    convergent: Convergent
    discriminant_id: str
    exponent: int


def _fold(quotients):
    p, s = 1, 0
    pm, sm = 0, 1
    for a in quotients:
        p, s, pm, sm = a * p + pm, a * s + sm, p, s
    return p, s


def cf_expand(num, den) -> ContinuedFraction:
    """Euclidean expansion; the final quotient is automatically >= 2."""
    if den <= 0 or num < 0:
        raise ValueError("want nonnegative numerator, positive denominator")
    g = gcd(num, den)
    num, den = num // g, den // g
    quotients = []
    a, b = num, den
    while b:
        q, r = divmod(a, b)
        quotients.append(q)
        a, b = b, r
    return ContinuedFraction(num, den, tuple(quotients))


def convergents(cf: ContinuedFraction):
    """All truncations p_k/q_k via the standard three-term recurrence."""
    out = []
    p, q = 1, 0
    pm, qm = 0, 1
    for k, a in enumerate(cf.quotients):
        p, q, pm, qm = a * p + pm, a * q + qm, p, q
        out.append(Convergent(p, q, k))
    return out


def legendre_scan(num, den, t, q_cap, discriminant_id=EQ4):
    """Convergents p/q with q <= q_cap and |num/den - p/q| < 1/(2^t q^2).

    The bound is checked as |num*q - p*den| * 2^t * q < den, exactly.
    """
    if t < 0 or q_cap < 1:
        raise ValueError("want t >= 0 and q_cap >= 1")
    cf = cf_expand(num, den)
    hits = []
    for c in convergents(cf):
        if c.q > q_cap:
            break
        if abs(cf.numerator * c.q - c.p * cf.denominator) * 2**t * c.q < cf.denominator:
            hits.append(DiscriminantHit(c, discriminant_id, t))
    return hits


def discriminant5_scan(num, den, Delta, A_max):
    """Denominator-jump scan: q_s with q_s*Delta < q_{s+1} and q_s < A_max.

    Walks the denominator sequence q_1..q_t (the index-0 convergent dropped)
    over consecutive pairs; emits the s-th convergent for each passing s.
    """
    if Delta < 1 or A_max < 1:
        raise ValueError("want positive Delta and A_max")
    conv = convergents(cf_expand(num, den))[1:]
    hits = []
    for c, nxt in zip(conv, conv[1:]):
        if c.q * Delta < nxt.q and c.q < A_max:
            hits.append(DiscriminantHit(c, EQ5, 0))
    return hits
