"""Command-line surface: key lifecycle, attack runs, oracle queries,
probability experiments, and golden-file reproduction.

All numbers cross this boundary as decimal strings.  Exit codes: 0 success,
1 operational error (reported as `error: <Type>: <message>` on stderr),
2 usage error.
"""

import argparse
import os
import random
import sys

from . import attacks, experiments, oracle, reproduce, scheme
from .errors import LeverlabError

DB_ENV = "LEVERLAB_DB"


def _write_or_print(text, path):
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_public(path):
    with open(path, "r", encoding="ascii") as fh:
        return scheme.parse_public_key(fh.read())


def _load_private(path):
    with open(path, "r", encoding="ascii") as fh:
        return scheme.parse_private_key(fh.read())


def _int_list(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}")


def _cmd_keygen(args):
    rng = random.Random(args.seed)
    pub, priv = scheme.keygen(args.n, args.p, mode=args.mode, rng=rng,
                              generator_w=args.generator_w)
    with open(args.out + ".pub", "w", encoding="ascii") as fh:
        fh.write(scheme.serialize_public_key(pub))
    with open(args.out + ".priv", "w", encoding="ascii") as fh:
        fh.write(scheme.serialize_private_key(priv))
    print(f"wrote {args.out}.pub")
    print(f"wrote {args.out}.priv")
    return 0


def _cmd_encrypt(args):
    pub = _load_public(args.key)
    c = scheme.encrypt(pub, args.bits)
    _write_or_print(f"{int(c)}\n", args.out)
    return 0


def _cmd_decrypt(args):
    priv = _load_private(args.key)
    if args.value is not None:
        raw = args.value
    else:
        with open(getattr(args, "in"), "r", encoding="ascii") as fh:
            raw = fh.read().strip()
    block = scheme.decrypt(priv, int(raw))
    _write_or_print(str(block) + "\n", args.out)
    return 0


def _emit_report(report, args):
    _write_or_print(attacks.report_to_json(report), args.report)


def _cmd_attack_cf_const(args):
    report = attacks.constant_cf_attack(_load_public(args.key), P=args.p)
    _emit_report(report, args)
    return 0


def _cmd_attack_wint_const(args):
    report = attacks.constant_wint_attack(
        _load_public(args.key), P=args.p, candidates=args.candidates
    )
    _emit_report(report, args)
    return 0


def _cmd_attack_cf(args):
    report = attacks.cf_attack(
        _load_public(args.key), args.m, getattr(args, "h"), args.discriminant,
        P=args.p, budget=args.budget, jobs=args.jobs,
    )
    _emit_report(report, args)
    return 0


def _cmd_attack_liu_zhang(args):
    report = attacks.liu_zhang_attack(_load_public(args.key), jobs=args.jobs)
    if args.table:
        with open(args.table, "w", encoding="ascii") as fh:
            fh.write(attacks.format_table1(report))
    _emit_report(report, args)
    return 0


def _cmd_attack_wint_lever(args):
    report = attacks.wint_lever_attack(
        _load_public(args.key), P=args.p, omega=args.omega,
        root_cap=args.root_cap,
    )
    _emit_report(report, args)
    return 0


def _cmd_oracle_query(args):
    pub = _load_public(args.key)
    db = oracle.OracleDatabase(args.db)
    rec = oracle.lever_oracle(pub, db, random.Random(args.seed), P=args.p)
    print(oracle._record_line(rec))
    return 0


def _cmd_oracle_forge(args):
    pub = _load_public(args.key)
    forgery = oracle.forge_representation(
        pub, args.x, args.y, args.ay, random.Random(args.seed)
    )
    print("x " + " ".join(str(i) for i in forgery.x_indices))
    print("y " + " ".join(str(i) for i in forgery.y_indices))
    print("A_x " + " ".join(str(a) for a in forgery.A_x))
    print("A_y " + " ".join(str(a) for a in forgery.A_y))
    print("ell_x " + " ".join(str(v) for v in forgery.ell_x))
    print("ell_y " + " ".join(str(v) for v in forgery.ell_y))
    print(f"W {forgery.W}")
    print(f"M {forgery.M}")
    return 0


def _cmd_experiment(args):
    if args.experiment == "p4":
        cfg = experiments.TrialConfig(n=args.n, m=args.m, h=getattr(args, "h"),
                                      P=args.p, trials=args.trials,
                                      seed=args.seed, mode=args.mode)
        rep = experiments.estimate_p4(cfg, jobs=args.jobs)
    elif args.experiment == "p8":
        rep = experiments.estimate_p8(args.n, args.p, args.trials, args.seed,
                                      jobs=args.jobs)
    else:
        rep = experiments.spurious_convergent_stats(
            args.n, args.m, getattr(args, "h"), args.p, args.trials,
            args.seed, jobs=args.jobs,
        )
    _write_or_print(experiments.format_frequency_table([rep]), args.out)
    return 0


def _cmd_reproduce(args):
    if args.example == "example1":
        text, diff = reproduce.run_example1()
    else:
        text, diff = reproduce.run_example2(jobs=args.jobs)
    sys.stdout.write(text)
    if diff:
        sys.stderr.write(diff)
        return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="leverlab",
        description="workbench for the lever-exponent subset-product scheme",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=scheme.MODES, default="strict")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="path prefix for .pub/.priv")
    p.add_argument("--generator-w", action="store_true",
                   help="force W to generate the whole group")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt one bit block")
    p.add_argument("--key", required=True, help="public key file")
    p.add_argument("--bits", required=True, help="block as a 0/1 string")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt one ciphertext")
    p.add_argument("--key", required=True, help="private key file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", help="file holding the decimal ciphertext")
    src.add_argument("--value", help="decimal ciphertext")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_decrypt)

    atk = sub.add_parser("attack", help="run a key-recovery attack")
    asub = atk.add_subparsers(dest="attack_cmd", required=True)

    def attack_parser(name, func, **extra):
        ap = asub.add_parser(name)
        ap.add_argument("--key", required=True, help="public key file")
        ap.add_argument("--report", help="write the JSON report here")
        ap.set_defaults(func=func)
        return ap

    ap = attack_parser("cf-const", _cmd_attack_cf_const)
    ap.add_argument("--p", type=int)

    ap = attack_parser("wint-const", _cmd_attack_wint_const)
    ap.add_argument("--p", type=int)
    ap.add_argument("--candidates", type=_int_list,
                    help="comma-separated value guesses (default 2..P)")

    ap = attack_parser("cf", _cmd_attack_cf)
    ap.add_argument("--m", type=int, required=True)
    ap.add_argument("--h", type=int, required=True)
    ap.add_argument("--discriminant", required=True,
                    choices=("eq4", "eq4prime", "eq4doubleprime"))
    ap.add_argument("--p", type=int)
    ap.add_argument("--budget", type=int, default=attacks.DEFAULT_SCAN_BUDGET)
    ap.add_argument("--jobs", type=int, default=1)

    ap = attack_parser("liu-zhang", _cmd_attack_liu_zhang)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--table", help="write the candidate table here")

    ap = attack_parser("wint-lever", _cmd_attack_wint_lever)
    ap.add_argument("--p", type=int)
    ap.add_argument("--omega", type=_int_list,
                    help="comma-separated exponents (default +-5..+-(n+4))")
    ap.add_argument("--root-cap", type=int, default=64)

    orc = sub.add_parser("oracle", help="query or forge exponent assignments")
    osub = orc.add_subparsers(dest="oracle_cmd", required=True)

    op = osub.add_parser("query")
    op.add_argument("--key", required=True, help="public key file")
    op.add_argument("--db", default=os.environ.get(DB_ENV),
                    help=f"record store path (default ${DB_ENV})")
    op.add_argument("--seed", type=int, required=True)
    op.add_argument("--p", type=int)
    op.set_defaults(func=_cmd_oracle_query)

    op = osub.add_parser("forge")
    op.add_argument("--key", required=True, help="public key file")
    op.add_argument("--x", type=_int_list, required=True)
    op.add_argument("--y", type=_int_list, required=True)
    op.add_argument("--ay", type=_int_list, required=True,
                    help="chosen y-side values, one per y index")
    op.add_argument("--seed", type=int, required=True)
    op.set_defaults(func=_cmd_oracle_forge)

    exp = sub.add_parser("experiment", help="run a seeded frequency estimate")
    esub = exp.add_subparsers(dest="experiment", required=True)
    for name in ("p4", "p8", "spurious"):
        ep = esub.add_parser(name)
        ep.add_argument("--n", type=int, required=True)
        if name != "p8":
            ep.add_argument("--m", type=int, required=True)
            ep.add_argument("--h", type=int, required=True)
        ep.add_argument("--p", type=int, required=True)
        ep.add_argument("--trials", type=int, required=True)
        ep.add_argument("--seed", type=int, required=True)
        ep.add_argument("--jobs", type=int, default=1)
        ep.add_argument("--out")
        if name == "p4":
            ep.add_argument("--mode", choices=scheme.MODES, default="legacy")
        ep.set_defaults(func=_cmd_experiment)

    rep = sub.add_parser("reproduce", help="rerun a worked demonstration")
    rsub = rep.add_subparsers(dest="example", required=True)
    for name in ("example1", "example2"):
        rp = rsub.add_parser(name)
        rp.add_argument("--jobs", type=int, default=1)
        rp.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LeverlabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
