"""The subset-product cryptosystem with per-element exponent levers.

Public elements are C_i = A_i * W^{lever(i)} mod M over a prime M; the lever
values are a secret injection into {+-5 .. +-(n+4)}.  Encryption multiplies
the C_i selected by the plaintext bits; decryption walks the ciphertext back
through powers of W until the bare product of A-values reappears.
"""

from dataclasses import dataclass
from typing import Optional

from .coprime import BitBlock, CoprimeSequence, gen_coprime_sequence, subset_product
from .errors import (
    GenerationExhausted,
    InvalidKeyMaterial,
    NotACiphertext,
    ShapeError,
)
from .numtheory import (
    Modulus,
    factorize,
    find_generator,
    find_prime_in_progression,
    is_probable_prime,
    mod_inv,
    mod_pow,
)

MODES = ("strict", "legacy")


def omega_pm(n):
    """The allowed lever exponents for n elements: +-5 .. +-(n+4)."""
    if n < 1:
        raise ValueError("want n >= 1")
    top = n + 4
    return tuple(range(-top, -4)) + tuple(range(5, top + 1))


def _lever_primes(n):
    """Primes q with 5 <= q <= n+4 (the absolute lever values)."""
    return [q for q in range(5, n + 5) if is_probable_prime(q)]


def strict_modulus_step(n):
    """Product of q^2 over lever primes: strict moduli have M = 1 mod this."""
    step = 1
    for q in _lever_primes(n):
        step *= q * q
    return step


@dataclass(frozen=True)
class LeverAssignment:
    """Injective exponent assignment; value i must lie in +-[5, n+4]."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        n = len(self.values)
        if n == 0:
            raise ValueError("empty assignment")
        if len(set(self.values)) != n:
            raise ValueError("lever values must be pairwise distinct")
        bad = [v for v in self.values if not 5 <= abs(v) <= n + 4]
        if bad:
            raise ValueError(f"lever value {bad[0]} outside +-[5, {n + 4}]")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class PublicKey:
    P: int
    mode: str
    M: Modulus
    C: tuple

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(self.C))
        if self.mode not in MODES:
            raise InvalidKeyMaterial(f"unknown mode {self.mode!r}")
        if self.P < 2:
            raise InvalidKeyMaterial("bound P must be at least 2")
        m = int(self.M)
        if not self.C:
            raise InvalidKeyMaterial("no public elements")
        if any(not 0 < c < m for c in self.C):
            raise InvalidKeyMaterial("public elements must lie in [1, M-1]")
        if len(set(self.C)) != len(self.C):
            raise InvalidKeyMaterial("public elements must be distinct")

    @property
    def n(self):
        return len(self.C)


@dataclass(frozen=True)
class PrivateKey:
    P: int
    mode: str
    M: Modulus
    A: CoprimeSequence
    W: int
    ell: Optional[LeverAssignment] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidKeyMaterial(f"unknown mode {self.mode!r}")
        m = int(self.M)
        if not 1 < self.W < m - 1:
            raise InvalidKeyMaterial("W must lie strictly inside (1, M-1)")
        if self.A.product >= m:
            raise InvalidKeyMaterial("product of A-values must stay below M")
        if any(a > self.P for a in self.A):
            raise InvalidKeyMaterial(f"A-value exceeds bound {self.P}")
        if self.mode == "strict":
            step = strict_modulus_step(len(self.A))
            if (m - 1) % step:
                raise InvalidKeyMaterial(
                    f"strict modulus needs {step} dividing M-1"
                )
        if self.ell is not None and len(self.ell) != len(self.A):
            raise InvalidKeyMaterial("lever assignment length mismatch")

    @property
    def n(self):
        return len(self.A)


@dataclass(frozen=True)
class Ciphertext:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise NotACiphertext("ciphertext residue must be positive")

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ConstantKeyMaterial:
    """Private side of a degenerate key whose levers all equal `exponent`."""

    A: CoprimeSequence
    W: int
    exponent: int
    W_power: int
    M: Modulus


def _draw_w(m, rng):
    while True:
        w = rng.randrange(2, m - 1)
        if pow(w, 2, m) != 1:
            return w


def _as_coprime(A, P):
    try:
        if isinstance(A, CoprimeSequence):
            return CoprimeSequence(A.values, bound=P)
        return CoprimeSequence(tuple(A), bound=P)
    except ValueError as e:
        raise InvalidKeyMaterial(str(e)) from e


def _as_lever(ell):
    try:
        return ell if isinstance(ell, LeverAssignment) else LeverAssignment(tuple(ell))
    except ValueError as e:
        raise InvalidKeyMaterial(str(e)) from e


def _as_modulus(M, lower, mode, n):
    try:
        m = M if isinstance(M, Modulus) else Modulus(int(M), prime=True)
        if not m.prime:
            m = Modulus(int(m), prime=True)
    except ValueError as e:
        raise InvalidKeyMaterial(str(e)) from e
    if int(m) <= lower:
        raise InvalidKeyMaterial("modulus must exceed the product of A-values")
    if mode == "strict":
        step = strict_modulus_step(n)
        if (int(m) - 1) % step:
            raise InvalidKeyMaterial(f"strict modulus needs {step} dividing M-1")
    return m


def keygen(n, P, mode="strict", rng=None, *, A=None, W=None, ell=None, M=None,
           generator_w=False):
    """Produce a key pair; any of A, W, ell, M may be injected verbatim.

    Generated strict-mode moduli are the first prime above the A-product in
    the progression 1 mod prod(q^2); legacy mode takes the least prime above
    the product.  Injected material is validated, never repaired.
    """
    if n < 3:
        raise ValueError("want at least 3 elements")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    needs_rng = A is None or ell is None or (W is None and not generator_w)
    if rng is None and needs_rng:
        raise ValueError("rng required when generating key components")

    seq = _as_coprime(A, P) if A is not None else gen_coprime_sequence(n, P, rng)
    if len(seq) != n:
        raise InvalidKeyMaterial(f"{len(seq)} A-values for n = {n}")

    lower = seq.product
    if M is not None:
        modulus = _as_modulus(M, lower, mode, n)
    elif mode == "strict":
        modulus = Modulus(find_prime_in_progression(strict_modulus_step(n), lower),
                          prime=True)
    else:
        modulus = Modulus(find_prime_in_progression(1, lower), prime=True)
    m = int(modulus)

    if W is not None and not 1 < W < m - 1:
        raise InvalidKeyMaterial("W must lie strictly inside (1, M-1)")
    if ell is not None:
        lever = _as_lever(ell)
        if len(lever) != n:
            raise InvalidKeyMaterial(f"{len(lever)} lever values for n = {n}")

    for _ in range(100):
        if W is None:
            if generator_w:
                w = find_generator(m, factorize(m - 1), rng)
            else:
                w = _draw_w(m, rng)
        else:
            w = W
        lever = _as_lever(ell) if ell is not None else LeverAssignment(
            tuple(rng.sample(omega_pm(n), n)))
        C = tuple(seq[i] * mod_pow(w, lever[i], m) % m for i in range(n))
        if len(set(C)) == n:
            break
        if W is not None and ell is not None:
            raise InvalidKeyMaterial("injected key collides on public elements")
    else:
        raise GenerationExhausted("no collision-free key after bounded retries")

    for i in range(n):
        if seq[i] * mod_pow(w, lever[i], m) % m != C[i]:
            raise InvalidKeyMaterial("key transform re-verification failed")

    pub = PublicKey(P=P, mode=mode, M=modulus, C=C)
    priv = PrivateKey(P=P, mode=mode, M=modulus, A=seq, W=w, ell=lever)
    return pub, priv


def gen_constant_key(n, P, rng, mode="legacy", exponent=None):
    """Degenerate key with one shared lever exponent (deliberately weak)."""
    if n < 2:
        raise ValueError("want at least 2 elements")
    seq = gen_coprime_sequence(n, P, rng)
    lower = seq.product
    if mode == "strict":
        modulus = Modulus(find_prime_in_progression(strict_modulus_step(n), lower),
                          prime=True)
    else:
        modulus = Modulus(find_prime_in_progression(1, lower), prime=True)
    m = int(modulus)
    w = _draw_w(m, rng)
    e = exponent if exponent is not None else rng.choice(omega_pm(n))
    wpow = mod_pow(w, e, m)
    C = tuple(a * wpow % m for a in seq)
    pub = PublicKey(P=P, mode=mode, M=modulus, C=C)
    return pub, ConstantKeyMaterial(A=seq, W=w, exponent=e, W_power=wpow, M=modulus)


def public_from_private(priv: PrivateKey) -> PublicKey:
    """Re-derive the public elements; needs the lever assignment retained."""
    if priv.ell is None:
        raise InvalidKeyMaterial("lever assignment was discarded")
    m = int(priv.M)
    C = tuple(priv.A[i] * mod_pow(priv.W, priv.ell[i], m) % m
              for i in range(priv.n))
    return PublicKey(P=priv.P, mode=priv.mode, M=priv.M, C=C)


def _as_block(bits, n):
    if isinstance(bits, BitBlock):
        block = bits
    elif isinstance(bits, str):
        block = BitBlock.from_string(bits)
    else:
        block = BitBlock(tuple(bits))
    if len(block) != n:
        raise ShapeError(f"{len(block)}-bit block for an n = {n} key")
    return block


def encrypt(pub: PublicKey, bits) -> Ciphertext:
    """Multiply together the public elements selected by the bits."""
    block = _as_block(bits, pub.n)
    value = subset_product(pub.C, block.bits, int(pub.M))
    return Ciphertext(value)


def decrypt(priv: PrivateKey, c, step_cap=None) -> BitBlock:
    """Two-chain search for the bit block behind a ciphertext residue.

    Chain 0 repeatedly multiplies by W, chain 1 by W^{-1}.  Even values are
    multiplied onward without a divisibility test; each odd value gets one
    greedy division pass over the A-values, and the chains swap on failure.
    Either chain exceeding its multiplication budget ends it; both ending
    means the input was not produced by this key.
    """
    m = int(priv.M)
    n = priv.n
    cap = n * (n + 4) + 1 if step_cap is None else step_cap
    if cap < 1:
        raise ValueError("want a positive step budget")
    value = int(c) % m
    if value == 0:
        raise NotACiphertext("zero residue is never a ciphertext")
    step = (priv.W % m, mod_inv(priv.W, m))
    chain = [value, value]
    used = [0, 0]
    h = 0
    while True:
        if chain[h] % 2 == 0:
            if used[h] < cap:
                chain[h] = chain[h] * step[h] % m
                used[h] += 1
                continue
            if used[1 - h] >= cap:
                raise NotACiphertext("step budget exhausted on both chains")
            h = 1 - h
        else:
            g = chain[h]
            bits = [0] * n
            for i, a in enumerate(priv.A):
                if g % a == 0:
                    bits[i] = 1
                    g //= a
                if g == 1:
                    break
            if g == 1:
                return BitBlock(tuple(bits))
            if used[1 - h] < cap:
                h = 1 - h
            elif used[h] >= cap:
                raise NotACiphertext("step budget exhausted on both chains")
        chain[h] = chain[h] * step[h] % m
        used[h] += 1


def serialize_public_key(pub: PublicKey) -> str:
    lines = [
        "version 1",
        f"n {pub.n}",
        f"P {pub.P}",
        f"mode {pub.mode}",
        f"M {int(pub.M)}",
        "C " + " ".join(str(c) for c in pub.C),
    ]
    return "\n".join(lines) + "\n"


def serialize_private_key(priv: PrivateKey) -> str:
    lines = [
        "version 1",
        f"n {priv.n}",
        f"P {priv.P}",
        f"mode {priv.mode}",
        f"M {int(priv.M)}",
        f"W {priv.W}",
        "A " + " ".join(str(a) for a in priv.A),
    ]
    if priv.ell is not None:
        lines.append("ell " + " ".join(str(v) for v in priv.ell))
    return "\n".join(lines) + "\n"


def _parse_fields(text, required, optional=()):
    fields = {}
    order = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        name, _, rest = line.partition(" ")
        if name in fields:
            raise InvalidKeyMaterial(f"duplicate field {name!r}")
        fields[name] = rest.strip()
        order.append(name)
    want = list(required) + [f for f in optional if f in fields]
    if order != want:
        raise InvalidKeyMaterial(f"fields {order} do not match layout {want}")
    if fields.get("version") != "1":
        raise InvalidKeyMaterial(f"unsupported version {fields.get('version')!r}")
    return fields


def _ints(text):
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError as e:
        raise InvalidKeyMaterial(f"bad integer list {text!r}") from e


def parse_public_key(text) -> PublicKey:
    f = _parse_fields(text, ("version", "n", "P", "mode", "M", "C"))
    C = _ints(f["C"])
    if len(C) != int(f["n"]):
        raise InvalidKeyMaterial("n does not match the element count")
    try:
        modulus = Modulus(int(f["M"]), prime=True)
    except ValueError as e:
        raise InvalidKeyMaterial(str(e)) from e
    return PublicKey(P=int(f["P"]), mode=f["mode"], M=modulus, C=C)


def parse_private_key(text) -> PrivateKey:
    f = _parse_fields(text, ("version", "n", "P", "mode", "M", "W", "A"),
                      optional=("ell",))
    A = _ints(f["A"])
    if len(A) != int(f["n"]):
        raise InvalidKeyMaterial("n does not match the A-value count")
    try:
        modulus = Modulus(int(f["M"]), prime=True)
    except ValueError as e:
        raise InvalidKeyMaterial(str(e)) from e
    P = int(f["P"])
    ell = _as_lever(_ints(f["ell"])) if "ell" in f else None
    return PrivateKey(P=P, mode=f["mode"], M=modulus,
                      A=_as_coprime(A, P), W=int(f["W"]), ell=ell)
