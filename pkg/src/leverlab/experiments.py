"""Seeded Monte-Carlo estimates of scan-hit probabilities.

Each trial draws its own Random("tag:seed:index") stream, so results are
identical for a fixed seed no matter how trials are scheduled, and all
frequencies stay exact rationals.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import prod
import random

from .contfrac import EQ4, EQ4DOUBLEPRIME, legendre_scan
from .errors import GenerationExhausted
from .numtheory import is_probable_prime, mod_inv
from .scheme import MODES, LeverAssignment, keygen, omega_pm


@dataclass(frozen=True)
class TrialConfig:
    n: int
    m: int
    h: int
    P: int
    trials: int
    seed: int
    mode: str = "legacy"

    def __post_init__(self):
        if self.m < 1 or self.h < 1 or self.m + self.h > self.n:
            raise ValueError("want m, h >= 1 with m + h <= n")
        if self.trials < 1:
            raise ValueError("want at least one trial")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class FrequencyReport:
    experiment: str
    params: dict
    hits: int
    trials: int
    frequency: Fraction
    theory_value: Fraction

    def __post_init__(self):
        if not 0 <= self.frequency <= 1 or self.frequency != Fraction(
            self.hits, self.trials
        ):
            raise ValueError("frequency must equal hits/trials in [0, 1]")

    @property
    def ratio(self):
        return self.frequency / self.theory_value


def _trial_rng(tag, seed, index):
    return random.Random(f"{tag}:{seed}:{index}")


def member_bound(n):
    """Smallest member cap that comfortably fits n pairwise-coprime values.

    Returns the 2n-th prime.  The scan cap P is a separate knob: it limits
    the denominators an attacker would accept, not the key material, and at
    desk scale (say n=10, P=17) no key with members below P even exists.
    """
    count, v = 0, 1
    while count < 2 * n:
        v += 1
        if is_probable_prime(v):
            count += 1
    return v


def _sample_non_cancelling(priv, m, h, rng):
    """Disjoint 0-based index tuples whose exponent sums differ."""
    for _ in range(500):
        idx = rng.sample(range(priv.n), m + h)
        xs, ys = idx[:m], idx[m:]
        if sum(priv.ell[i] for i in xs) != sum(priv.ell[j] for j in ys):
            return xs, ys
    raise GenerationExhausted("no non-cancelling index tuple found")


def _ratio(pub, xs, ys):
    mod = int(pub.M)
    num = 1
    for i in xs:
        num = num * pub.C[i] % mod
    den = 1
    for j in ys:
        den = den * pub.C[j] % mod
    return num * mod_inv(den, mod) % mod


def _p4_trial(args):
    n, m, h, P, mode, seed, index = args
    rng = _trial_rng("p4", seed, index)
    pub, priv = keygen(n, member_bound(n), mode=mode, rng=rng)
    xs, ys = _sample_non_cancelling(priv, m, h, rng)
    gz = _ratio(pub, xs, ys)
    hits = legendre_scan(gz, int(pub.M), n - m - h, P**h, EQ4)
    return 1 if any(hit.convergent.q >= 2 for hit in hits) else 0


def _run_trials(worker, args_list, jobs):
    if jobs <= 1:
        return [worker(a) for a in args_list]
    chunk = max(1, len(args_list) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, args_list, chunksize=chunk))


def estimate_p4(cfg: TrialConfig, jobs=1) -> FrequencyReport:
    """How often a non-cancelling index tuple still passes the strong scan.

    Per trial: fresh key, random disjoint (x, y) indices with unequal
    exponent sums, then a convergent scan at exponent n-m-h with
    denominators up to P^h.
    """
    args = [
        (cfg.n, cfg.m, cfg.h, cfg.P, cfg.mode, cfg.seed, t)
        for t in range(cfg.trials)
    ]
    hits = sum(_run_trials(_p4_trial, args, jobs))
    return FrequencyReport(
        experiment="p4",
        params={"n": cfg.n, "m": cfg.m, "h": cfg.h, "P": cfg.P,
                "mode": cfg.mode, "trials": cfg.trials, "seed": cfg.seed},
        hits=hits,
        trials=cfg.trials,
        frequency=Fraction(hits, cfg.trials),
        theory_value=Fraction(1, 2) ** (cfg.n - cfg.m - cfg.h - 1),
    )


def _p8_trial(args):
    n, P, seed, index = args
    rng = _trial_rng("p8", seed, index)
    pub, priv = keygen(n, member_bound(n), mode="legacy", rng=rng)
    xs, ys = _sample_non_cancelling(priv, 2, 1, rng)
    gz = _ratio(pub, xs, ys)
    hits = legendre_scan(gz, int(pub.M), 1, P, EQ4DOUBLEPRIME)
    return 1 if any(hit.convergent.q >= 2 for hit in hits) else 0


def estimate_p8(n, P, trials, seed, jobs=1) -> FrequencyReport:
    """How often the weak (single doubling) scan admits some denominator
    below P for a non-cancelling (x_1, x_2, y_1) triple."""
    if n < 4:
        raise ValueError("want n >= 4")
    if P < 3:
        raise ValueError("want P >= 3")
    if trials < 1:
        raise ValueError("want at least one trial")
    args = [(n, P, seed, t) for t in range(trials)]
    hits = sum(_run_trials(_p8_trial, args, jobs))
    return FrequencyReport(
        experiment="p8",
        params={"n": n, "P": P, "trials": trials, "seed": seed},
        hits=hits,
        trials=trials,
        frequency=Fraction(hits, trials),
        theory_value=1 - Fraction(3, P + 2),
    )


def sample_cancelling_assignment(n, m, h, rng):
    """Indices plus a full exponent assignment with equal x/y sums.

    Random search over injective assignments; the cancelling tuple is the
    first (m + h)-subset drawn, so remaining positions are unconstrained.
    """
    pool = omega_pm(n)
    for _ in range(2000):
        idx = rng.sample(range(n), m + h)
        values = rng.sample(pool, n)
        xs, ys = idx[:m], idx[m:]
        if sum(values[i] for i in xs) == sum(values[j] for j in ys):
            return xs, ys, LeverAssignment(tuple(values))
    raise GenerationExhausted("no cancelling assignment found")


def _spurious_trial(args):
    n, m, h, P, seed, index = args
    rng = _trial_rng("spurious", seed, index)
    xs, ys, lever = sample_cancelling_assignment(n, m, h, rng)
    pub, priv = keygen(n, member_bound(n), mode="legacy", rng=rng, ell=lever)
    gz = _ratio(pub, xs, ys)
    true_q = prod(priv.A[j] for j in ys)
    hits = legendre_scan(gz, int(pub.M), n - m - h, max(P**h, true_q), EQ4)
    qs = [hit.convergent.q for hit in hits if hit.convergent.q >= 2]
    if true_q not in qs:
        raise RuntimeError(
            f"planted denominator {true_q} missing from scan hits {qs}"
        )
    return 1 if any(q != true_q and q <= P**h for q in qs) else 0


def spurious_convergent_stats(n, m, h, P, trials, seed, jobs=1) -> FrequencyReport:
    """With a planted cancelling tuple, how often extra denominators pass.

    The planted product always appears (checked every trial); a hit is a
    trial whose scan also admits some other denominator.
    """
    cfg = TrialConfig(n=n, m=m, h=h, P=P, trials=trials, seed=seed)
    args = [(n, m, h, P, seed, t) for t in range(trials)]
    hits = sum(_run_trials(_spurious_trial, args, jobs))
    return FrequencyReport(
        experiment="spurious",
        params={"n": n, "m": m, "h": h, "P": P, "trials": trials, "seed": seed},
        hits=hits,
        trials=trials,
        frequency=Fraction(hits, trials),
        theory_value=Fraction(1, 2) ** (cfg.n - cfg.m - cfg.h - 1),
    )


def format_frequency_table(reports) -> str:
    """Tab-separated table, exact rationals rendered as num/den."""
    cols = ["experiment", "n", "m", "h", "P", "mode", "trials", "seed",
            "hits", "frequency", "theory", "ratio"]
    lines = ["\t".join(cols)]
    for r in reports:
        p = r.params
        lines.append("\t".join(str(v) for v in [
            r.experiment,
            p.get("n", "-"), p.get("m", "-"), p.get("h", "-"),
            p.get("P", "-"), p.get("mode", "-"),
            r.trials, p.get("seed", "-"), r.hits,
            r.frequency, r.theory_value, r.ratio,
        ]))
    return "\n".join(lines) + "\n"
