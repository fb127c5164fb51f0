"""Arbitrary-precision modular arithmetic kernel.

Everything downstream (key transform, attacks, oracle) runs on these
primitives: modular powers with signed exponents, Miller-Rabin, Brent-rho
factoring, order/generator computation, Pohlig-Hellman discrete logs and
e-th roots in prime fields.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
import random

from .errors import (
    BadFactorization,
    FactorizationTooHard,
    NoSolution,
    NotInvertible,
    SearchExhausted,
)

# Pohlig-Hellman refuses group orders with a prime factor at or above this.
DLOG_FACTOR_BOUND = 2**40


@dataclass(frozen=True)
class Modulus:
    """A modulus M >= 2, optionally asserted prime at construction."""

    value: int
    prime: bool = False

    def __post_init__(self):
        if self.value < 2:
            raise ValueError("modulus must be >= 2")
        if self.prime and not is_probable_prime(self.value):
            raise ValueError(f"modulus {self.value} flagged prime but is composite")

    @property
    def mbar(self):
        """Group order M - 1 (meaningful when prime)."""
        return self.value - 1

    def __int__(self):
        return self.value


def mvalue(M) -> int:
    """Accept either a plain int or a Modulus."""
    return M.value if isinstance(M, Modulus) else int(M)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ((p, e), ...) with strictly increasing primes."""

    pairs: tuple

    def __post_init__(self):
        last = 1
        for p, e in self.pairs:
            if p <= last or e < 1:
                raise BadFactorization(f"malformed factorization {self.pairs}")
            if not is_probable_prime(p):
                raise BadFactorization(f"{p} is not prime")
            last = p

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    @property
    def primes(self):
        return tuple(p for p, _ in self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def mod_pow(base, exp, M):
    """base**exp mod M with signed exponents; negative exponents invert."""
    m = mvalue(M)
    try:
        return pow(base % m, exp, m)
    except ValueError:
        raise NotInvertible(f"{base} not invertible mod {m} (gcd {gcd(base, m)})")


def mod_inv(a, M):
    """Inverse of a unit mod M."""
    m = mvalue(M)
    try:
        return pow(a % m, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} not invertible mod {m} (gcd {gcd(a, m)})")


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(x) -> bool:
    """Miller-Rabin: deterministic below 2**64, error < 2**-80 above."""
    if x < 2:
        return False
    for p in _SMALL_PRIMES:
        if x % p == 0:
            return x == p
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_SMALL_PRIMES)
    if x >= 2**64:
        rng = random.Random(x)
        bases += [rng.randrange(2, x - 1) for _ in range(40)]
    for a in bases:
        v = pow(a, d, x)
        if v == 1 or v == x - 1:
            continue
        for _ in range(s - 1):
            v = v * v % x
            if v == x - 1:
                break
        else:
            return False
    return True


def _brent_rho(n, rng) -> int:
    """One Brent-cycle attempt; returns a nontrivial factor of composite n or 0."""
    if n % 2 == 0:
        return 2
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        if r > 1 << 22:
            return 0
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else 0


def factorize(x, *, rho_restarts=40) -> Factorization:
    """Full factorization by trial division then Brent rho.

    Large prime cofactors are fine (Miller-Rabin certifies them); a composite
    that survives the rho restarts raises FactorizationTooHard.
    """
    if x < 1:
        raise ValueError("factorize wants a positive integer")
    found = {}
    for p in range(2, 10000):
        if p * p > x:
            break
        while x % p == 0:
            found[p] = found.get(p, 0) + 1
            x //= p
    stack = [x] if x > 1 else []
    rng = random.Random(0xFAC7)
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_probable_prime(c):
            found[c] = found.get(c, 0) + 1
            continue
        for _ in range(rho_restarts):
            d = _brent_rho(c, rng)
            if d:
                stack += [d, c // d]
                break
        else:
            raise FactorizationTooHard(f"could not split composite {c}")
    return Factorization(tuple(sorted(found.items())))


def find_prime_in_progression(D, lower, *, max_candidates=10**6) -> int:
    """Least prime p > lower with p = 1 (mod D)."""
    if D < 1 or lower < 1:
        raise ValueError("D and lower must be positive")
    c = lower + 1
    c += (1 - c) % D
    for _ in range(max_candidates):
        if c > 2 and is_probable_prime(c):
            return c
        c += D
    raise SearchExhausted(f"no prime = 1 mod {D} in ({lower}, {c}]")


def _check_group_factorization(M, f):
    m = mvalue(M)
    if f.value != m - 1:
        raise BadFactorization(f"factorization multiplies to {f.value}, expected {m - 1}")
    return m


def element_order(w, M, f: Factorization) -> int:
    """Multiplicative order of w mod prime M, given the factorization of M-1."""
    m = _check_group_factorization(M, f)
    w %= m
    if w == 0:
        raise ValueError("0 has no multiplicative order")
    d = m - 1
    for p, _ in f:
        while d % p == 0 and pow(w, d // p, m) == 1:
            d //= p
    return d


@lru_cache(maxsize=4096)
def _scan_generator(m, f):
    checks = [(m - 1) // p for p in f.primes]
    for g in range(2, m):
        if all(pow(g, e, m) != 1 for e in checks):
            return g
    raise SearchExhausted(f"no generator found mod {m}")


def find_generator(M, f: Factorization, rng=None, *, max_tries=10**5) -> int:
    """A generator of the multiplicative group mod prime M.

    Deterministic (memoized) scan from 2 without an rng; random sampling
    with one.
    """
    m = _check_group_factorization(M, f)
    if m == 2:
        return 1  # trivial unit group
    if rng is None:
        return _scan_generator(m, f)
    checks = [(m - 1) // p for p in f.primes]
    for _ in range(max_tries):
        g = rng.randrange(2, m)
        if all(pow(g, e, m) != 1 for e in checks):
            return g
    raise SearchExhausted(f"no generator found mod {m}")


def _bsgs(g, y, p, m):
    """x in [0, p) with g^x = y mod m, where g has order p; None on miss."""
    steps = isqrt(p - 1) + 1
    table = {}
    e = 1
    for j in range(steps):
        table.setdefault(e, j)
        e = e * g % m
    stride = mod_pow(g, -steps, m)
    gamma = y % m
    for i in range(steps):
        j = table.get(gamma)
        if j is not None:
            return i * steps + j
        gamma = gamma * stride % m
    return None


def discrete_log(y, g, M, f: Factorization) -> int:
    """x in [0, order of g) with g^x = y mod prime M, by Pohlig-Hellman."""
    m = _check_group_factorization(M, f)
    y %= m
    g %= m
    if y == 0 or g == 0:
        raise ValueError("arguments must be units")
    order = element_order(g, M, f)
    if pow(y, order, m) != 1:
        raise NoSolution(f"{y} lies outside the subgroup generated by {g}")
    residues = []
    moduli = []
    d = order
    for p, _ in f:
        k = 0
        while d % p == 0:
            d //= p
            k += 1
        if k == 0:
            continue
        if p >= DLOG_FACTOR_BOUND:
            raise FactorizationTooHard(f"order factor {p} exceeds dlog bound")
        pk = p**k
        gs = pow(g, order // pk, m)
        ys = pow(y, order // pk, m)
        # digit-lift base p: x = x0 + x1 p + ... + x_{k-1} p^{k-1}
        gamma = pow(gs, pk // p, m)
        x = 0
        for j in range(k):
            target = pow(ys * mod_pow(gs, -x, m) % m, pk // p ** (j + 1), m)
            digit = _bsgs(gamma, target, p, m)
            if digit is None:
                raise NoSolution("subgroup miss during digit lift")
            x += digit * p**j
        residues.append(x)
        moduli.append(pk)
    x = 0
    prod = 1
    for r, pk in zip(residues, moduli):
        # CRT fold
        x += (r - x) * mod_inv(prod, pk) % pk * prod
        prod *= pk
    x %= prod if prod > 1 else 1
    if pow(g, x, m) != y:
        raise NoSolution("discrete log verification failed")
    return x


@dataclass(frozen=True)
class RootSet:
    """Solutions of W^e = y: sorted roots, total count, truncation marker."""

    roots: tuple
    total: int
    truncated: bool

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def mod_roots(e, y, M, f: Factorization, cap=64) -> RootSet:
    """All W with W^e = y mod prime M, via a generator and one discrete log.

    Negative e solves W^|e| = y^{-1}.  Solvable congruences have exactly
    gcd(|e|, M-1) roots; at most cap of them (in exponent order, then sorted)
    are returned, with truncated set when the count exceeds cap.
    """
    if e == 0:
        raise ValueError("exponent must be nonzero")
    if cap < 1:
        raise ValueError("cap must be positive")
    m = _check_group_factorization(M, f)
    y %= m
    if y == 0:
        raise ValueError("y must be a unit")
    if e < 0:
        e, y = -e, mod_inv(y, m)
    g = find_generator(M, f)
    t = discrete_log(y, g, M, f)
    d = gcd(e, m - 1)
    if t % d:
        raise NoSolution(f"no solutions: gcd {d} does not divide dlog {t}")
    step = (m - 1) // d
    s0 = t // d * mod_inv(e // d, step) % step if step > 1 else 0
    kept = min(d, cap)
    roots = sorted(pow(g, s0 + i * step, m) for i in range(kept))
    return RootSet(tuple(roots), d, d > cap)
