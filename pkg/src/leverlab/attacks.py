"""Key-recovery attacks against the lever-exponent transform.

Two families: continued-fraction attacks hunt candidate A-values among
convergents of C-products over M (under several exactness thresholds), and
W-intersection attacks enumerate (A, exponent) guesses per element and
intersect the implied W sets.  Reports are immutable and order-stable so
parallel runs serialize identically.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice, permutations, product
import json
from math import prod

from .contfrac import (
    EQ2PRIME,
    EQ4,
    EQ4DOUBLEPRIME,
    EQ4PRIME,
    EQ5,
    Convergent,
    discriminant5_scan,
    legendre_scan,
)
from .coprime import is_coprime_sequence
from .errors import AttackBudgetExhausted, NoSolution
from .numtheory import (
    factorize,
    is_probable_prime,
    mod_inv,
    mod_pow,
    mod_roots,
    mvalue,
)
from .scheme import LeverAssignment, PublicKey, omega_pm

# combinations of per-element (A, exponent) options tried per surviving W
COMBO_CAP = 10_000

# hard ceiling on index tuples a continued-fraction scan may visit
DEFAULT_SCAN_BUDGET = 2_000_000


@dataclass(frozen=True)
class CandidateTuple:
    """One passing scan hit: a candidate value tied to the indices that
    produced it.  W-intersection attacks store the shared W candidate with
    empty index lists and no convergent."""

    value: int
    x_indices: tuple
    y_indices: tuple
    discriminant_id: str
    convergent: Convergent = None


@dataclass(frozen=True)
class RecoveredKey:
    """A full candidate private side.  `verified` means every public element
    re-derives from (A, W_power, ell); `candidate` means shape checks failed
    somewhere (out-of-bound value, invalid sequence)."""

    A: tuple
    W_power: int
    ell: object = None
    confidence: str = "candidate"


@dataclass(frozen=True)
class TripleAnnotation:
    """Per (target position, value): how many triples hit it, and the lever
    guess value implied by reading the multiplicity as (lever - 9)."""

    y_index: int
    value: int
    count: int
    lever_guess: int


@dataclass(frozen=True)
class AttackReport:
    attack: str
    params: dict
    tuples: tuple
    recovered: tuple
    scanned: int
    annotations: tuple = ()
    truncated_entries: tuple = ()

    @property
    def hits(self):
        return len(self.tuples)


def _pairwise_coprime(values):
    from math import gcd

    return all(
        gcd(values[i], values[j]) == 1
        for i in range(len(values))
        for j in range(i + 1, len(values))
    )


def constant_cf_attack(pub: PublicKey, P=None) -> AttackReport:
    """Recover a constant-exponent key from convergents of C_x/C_n ratios.

    For each x < n the ratio C_x*C_n^{-1}/M approximates L/A_n well enough
    that A_n must appear as a convergent denominator; every denominator
    candidate then yields a full trial key, marked verified when all values
    fit below P and form a valid sequence.
    """
    n = pub.n
    if n < 3:
        raise ValueError("want at least 3 public elements")
    P = pub.P if P is None else P
    m = int(pub.M)
    last_inv = mod_inv(pub.C[-1], m)
    tuples = []
    recovered = []
    seen = set()
    for x in range(1, n):
        gz = pub.C[x - 1] * last_inv % m
        for hit in legendre_scan(gz, m, 1, P, EQ2PRIME):
            q = hit.convergent.q
            if q < 2:
                continue
            tuples.append(CandidateTuple(q, (x,), (n,), EQ2PRIME, hit.convergent))
            wpow = pub.C[-1] * mod_inv(q, m) % m
            winv = mod_inv(wpow, m)
            trial = tuple(c * winv % m for c in pub.C)
            if trial in seen:
                continue
            seen.add(trial)
            ok = all(a <= P for a in trial) and is_coprime_sequence(trial)
            recovered.append(
                RecoveredKey(trial, wpow, None, "verified" if ok else "candidate")
            )
    return AttackReport(
        attack="cf-const",
        params={"n": n, "P": P, "M": m},
        tuples=tuple(tuples),
        recovered=tuple(recovered),
        scanned=n - 1,
    )


def constant_wint_attack(pub: PublicKey, P=None, candidates=None) -> AttackReport:
    """Intersect per-element W-power candidate sets for a constant key.

    Every guess a for A_i implies W-power C_i*a^{-1}; the true power lies in
    all n sets, so the intersection pins it (plus occasional strays).
    """
    n = pub.n
    if n < 2:
        raise ValueError("want at least 2 public elements")
    P = pub.P if P is None else P
    m = int(pub.M)
    pool = tuple(candidates) if candidates is not None else tuple(range(2, P + 1))
    maps = []
    for c in pub.C:
        maps.append({c * mod_inv(a, m) % m: a for a in pool})
    surviving = set(maps[0])
    for by_w in maps[1:]:
        surviving &= by_w.keys()
    tuples = []
    recovered = []
    for w in sorted(surviving):
        tuples.append(CandidateTuple(w, (), (), "wint-const", None))
        trial = tuple(maps[i][w] for i in range(n))
        ok = _pairwise_coprime(trial)
        recovered.append(
            RecoveredKey(trial, w, None, "verified" if ok else "candidate")
        )
    return AttackReport(
        attack="wint-const",
        params={"n": n, "P": P, "M": m, "candidates": len(pool)},
        tuples=tuple(tuples),
        recovered=tuple(recovered),
        scanned=n * len(pool),
    )


def _cf_exponent(discriminant_id, n, m, h):
    if discriminant_id == EQ4:
        return n - m - h
    if discriminant_id == EQ4PRIME:
        return 1
    if discriminant_id == EQ4DOUBLEPRIME:
        return n - 3
    raise ValueError(f"unknown discriminant {discriminant_id!r}")


def _cf_scan_chunk(args):
    C, mod, chunk, t, q_cap, disc = args
    out = []
    for xs, ys in chunk:
        num = 1
        for x in xs:
            num = num * C[x - 1] % mod
        den = 1
        for y in ys:
            den = den * C[y - 1] % mod
        gz = num * mod_inv(den, mod) % mod
        for hit in legendre_scan(gz, mod, t, q_cap, disc):
            c = hit.convergent
            if c.q >= 2:
                out.append((xs, ys, c.p, c.q, c.index))
    return out


def _chunked(seq, pieces):
    size = max(1, (len(seq) + pieces - 1) // pieces)
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _parallel(worker, chunks, jobs):
    if jobs <= 1 or len(chunks) <= 1:
        return [worker(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, chunks))


def cf_attack(pub: PublicKey, m, h, discriminant_id, P=None,
              budget=DEFAULT_SCAN_BUDGET, jobs=1) -> AttackReport:
    """Scan all ordered disjoint index tuples (x_1..x_m | y_1..y_h).

    Each tuple's ratio prod(C_x)*prod(C_y)^{-1}/M is expanded and its
    convergents tested under the chosen threshold with denominators up to
    P^h; every passing denominator is a candidate for the y-side product.
    """
    n = pub.n
    P = pub.P if P is None else P
    if not 1 <= m <= n - 1:
        raise ValueError(f"want 1 <= m <= {n - 1}")
    if not 1 <= h <= n - m:
        raise ValueError(f"want 1 <= h <= {n - m}")
    if discriminant_id == EQ4DOUBLEPRIME and ((m, h) != (2, 1) or n < 4):
        raise ValueError("this threshold is defined for m=2, h=1, n >= 4")
    t = _cf_exponent(discriminant_id, n, m, h)
    guard = m * h * n ** (m + h)
    if guard > budget:
        raise AttackBudgetExhausted(f"scan size {guard} exceeds budget {budget}")
    mod = int(pub.M)
    q_cap = P**h
    pairs = [(p_[:m], p_[m:]) for p_ in permutations(range(1, n + 1), m + h)]
    chunks = _chunked(pairs, max(1, jobs) * 4)
    args = [(pub.C, mod, chunk, t, q_cap, discriminant_id) for chunk in chunks]
    tuples = []
    for part in _parallel(_cf_scan_chunk, args, jobs):
        for xs, ys, cp, cq, idx in part:
            tuples.append(
                CandidateTuple(cq, xs, ys, discriminant_id, Convergent(cp, cq, idx))
            )
    return AttackReport(
        attack="cf",
        params={"n": n, "m": m, "h": h, "P": P, "M": mod,
                "discriminant": discriminant_id, "exponent": t, "q_cap": q_cap},
        tuples=tuple(tuples),
        recovered=(),
        scanned=len(pairs),
    )


def _first_primes(k):
    out = []
    cand = 2
    while len(out) < k:
        if is_probable_prime(cand):
            out.append(cand)
        cand += 1
    return out


def _ceil_div(a, b):
    return -(-a // b)


def _ceil_sqrt(x):
    from math import isqrt

    r = isqrt(x)
    return r if r * r == x else r + 1


def liu_zhang_parameters(n, M):
    """Prime table, cutoff u, jump threshold Delta, and the A-value cap."""
    m = mvalue(M)
    primes = _first_primes(2 * n)
    u = None
    running = 1
    for j, p in enumerate(primes, start=1):
        running *= p
        if running >= m:
            u = j - 1
            break
    if u is None:
        raise ValueError(f"modulus exceeds the product of the first {2 * n} primes")
    mid = prod(primes[n - 3 : u])
    delta = _ceil_sqrt(_ceil_div(m, 2 * mid))
    a_max = _ceil_div(m, prod(primes[: n - 1]))
    return tuple(primes), u, delta, a_max


def _jump_scan_chunk(args):
    C, mod, x1_list, delta, a_max = args
    n = len(C)
    inv = {y1: mod_inv(C[y1 - 1], mod) for y1 in range(1, n + 1)}
    out = []
    for x1 in x1_list:
        for x2 in range(1, n + 1):
            base = C[x1 - 1] * C[x2 - 1] % mod
            for y1 in range(1, n + 1):
                gz = base * inv[y1] % mod
                for hit in discriminant5_scan(gz, mod, delta, a_max):
                    c = hit.convergent
                    if c.q >= 2:
                        out.append((x1, x2, y1, c.p, c.q, c.index))
    return out


def liu_zhang_attack(pub: PublicKey, jobs=1) -> AttackReport:
    """Denominator-jump scan over all n^3 ordered (x_1, x_2, y_1) triples.

    Records every denominator q with q*Delta < q_next and q < A_max as a
    candidate for A_{y_1}, then annotates each (position, value) pair with
    its triple count and the count+9 lever guess.
    """
    n = pub.n
    if n < 4:
        raise ValueError("want at least 4 public elements")
    mod = int(pub.M)
    _, u, delta, a_max = liu_zhang_parameters(n, pub.M)
    chunks = _chunked(list(range(1, n + 1)), max(1, jobs) * 2)
    args = [(pub.C, mod, chunk, delta, a_max) for chunk in chunks]
    tuples = []
    for part in _parallel(_jump_scan_chunk, args, jobs):
        for x1, x2, y1, cp, cq, idx in part:
            tuples.append(CandidateTuple(cq, (x1, x2), (y1,), EQ5,
                                         Convergent(cp, cq, idx)))
    groups = {}
    for t in tuples:
        key = (t.y_indices[0], t.value)
        groups[key] = groups.get(key, 0) + 1
    annotations = tuple(
        TripleAnnotation(y1, value, count, count + 9)
        for (y1, value), count in groups.items()
    )
    return AttackReport(
        attack="liu-zhang",
        params={"n": n, "M": mod, "u": u, "Delta": delta, "A_max": a_max},
        tuples=tuple(tuples),
        recovered=(),
        scanned=n**3,
        annotations=annotations,
    )


def ell_sum_table(n):
    """For v in [10, n+4]: ordered pairs (a, b) in [5, n+4]^2 with a+b = v."""
    if n < 6:
        raise ValueError("want n >= 6")
    hi = n + 4
    hist = {}
    for a in range(5, hi + 1):
        for b in range(5, hi + 1):
            hist[a + b] = hist.get(a + b, 0) + 1
    return {v: hist.get(v, 0) for v in range(10, hi + 1)}


def wint_lever_attack(pub: PublicKey, P=None, omega=None, root_cap=64) -> AttackReport:
    """Exponent-aware W-intersection: solve W^e = C_i*a^{-1} for every
    (element, value guess, exponent guess), intersect the root sets on W,
    and assemble full keys from the surviving candidates.

    Requires a modulus whose group order factors within the desk budget.
    Root sets larger than root_cap and option combinations beyond a fixed
    cap are truncated and flagged.
    """
    n = pub.n
    P = pub.P if P is None else P
    exps = tuple(omega) if omega is not None else omega_pm(n)
    if not exps:
        raise ValueError("empty exponent set")
    mod = int(pub.M)
    group = factorize(mod - 1)
    options = []
    truncated = []
    scanned = 0
    for i in range(n):
        by_w = {}
        for a in range(2, P + 1):
            target = pub.C[i] * mod_inv(a, mod) % mod
            for e in exps:
                scanned += 1
                try:
                    roots = mod_roots(e, target, mod, group, cap=root_cap)
                except NoSolution:
                    continue
                if roots.truncated:
                    truncated.append(("roots", i + 1, a, e))
                for w in roots:
                    by_w.setdefault(w, []).append((a, e))
        options.append(by_w)
    surviving = set(options[0])
    for by_w in options[1:]:
        surviving &= by_w.keys()
    tuples = []
    recovered = []
    for w in sorted(surviving):
        tuples.append(CandidateTuple(w, (), (), "wint-lever", None))
        pools = [options[i][w] for i in range(n)]
        total = prod(len(p) for p in pools)
        if total > COMBO_CAP:
            truncated.append(("combos", w))
        for picked in islice(product(*pools), COMBO_CAP):
            values = tuple(a for a, _ in picked)
            exponents = tuple(e for _, e in picked)
            if len(set(exponents)) != n or not is_coprime_sequence(values):
                continue
            if any(values[i] * mod_pow(w, exponents[i], mod) % mod != pub.C[i]
                   for i in range(n)):
                continue
            try:
                lever = LeverAssignment(exponents)
            except ValueError:
                lever = exponents
            recovered.append(RecoveredKey(values, w, lever, "verified"))
    return AttackReport(
        attack="wint-lever",
        params={"n": n, "P": P, "M": mod, "omega": exps, "root_cap": root_cap},
        tuples=tuple(tuples),
        recovered=tuple(recovered),
        scanned=scanned,
        truncated_entries=tuple(truncated),
    )


def compatible_selections(report: AttackReport, budget=20_000):
    """Pick one annotated value per target position so that the chosen
    values form a valid sequence and the lever guesses stay distinct.

    Depth-first over positions in ascending order; stops after visiting
    `budget` nodes and returns the complete selections found by then.
    """
    by_y = {}
    for ann in report.annotations:
        by_y.setdefault(ann.y_index, []).append(ann)
    order = sorted(by_y)
    found = []
    state = []
    nodes = 0

    def walk(k):
        nonlocal nodes
        if k == len(order):
            found.append(tuple(state))
            return
        for ann in by_y[order[k]]:
            if nodes >= budget:
                return
            nodes += 1
            if any(prev.lever_guess == ann.lever_guess for prev in state):
                continue
            if not is_coprime_sequence([prev.value for prev in state] + [ann.value]):
                continue
            state.append(ann)
            walk(k + 1)
            state.pop()

    walk(0)
    return found


def format_table1(report: AttackReport) -> str:
    """Line-oriented candidate table: `A_<pos> = <value>` then the triples,
    grouped by (position, value) in scan order."""
    groups = {}
    for t in report.tuples:
        key = (t.y_indices[0], t.value)
        groups.setdefault(key, []).append(t.x_indices + t.y_indices)
    lines = []
    for (y1, value), triples in groups.items():
        body = ", ".join(
            "(" + ", ".join(str(i) for i in tr) + ")" for tr in triples
        )
        lines.append(f"A_{y1} = {value}\t{body}")
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= 2**53 else x
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return str(x)


def report_to_json(report: AttackReport) -> str:
    """Structured rendering; integers beyond 2^53 become decimal strings."""
    doc = {
        "attack": report.attack,
        "params": _jsonable(report.params),
        "scanned": report.scanned,
        "hits": report.hits,
        "tuples": [
            {
                "value": _jsonable(t.value),
                "x_indices": list(t.x_indices),
                "y_indices": list(t.y_indices),
                "discriminant": t.discriminant_id,
                "convergent": None if t.convergent is None else {
                    "p": _jsonable(t.convergent.p),
                    "q": _jsonable(t.convergent.q),
                    "index": t.convergent.index,
                },
            }
            for t in report.tuples
        ],
        "recovered": [
            {
                "A": [_jsonable(a) for a in r.A],
                "W_power": _jsonable(r.W_power),
                "ell": None if r.ell is None else [int(v) for v in r.ell],
                "confidence": r.confidence,
            }
            for r in report.recovered
        ],
        "annotations": [
            {
                "y_index": a.y_index,
                "value": _jsonable(a.value),
                "count": a.count,
                "lever_guess": a.lever_guess,
            }
            for a in report.annotations
        ],
        "truncated_entries": [_jsonable(t) for t in report.truncated_entries],
    }
    return json.dumps(doc, indent=2) + "\n"
