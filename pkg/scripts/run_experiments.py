"""Run the seeded frequency experiments across a small parameter ladder.

Prints one tab-separated table: scan-hit frequency under the strong
threshold for growing n (it should fall roughly geometrically), the weak
single-doubling test for growing caps (it should approach 1), and the
spurious-denominator rate next to its 1/2^(n-m-h-1) prediction.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from leverlab import experiments  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--out", help="write the table here instead of stdout")
    args = ap.parse_args(argv)

    reports = []
    for n in (6, 8, 10, 12):
        cfg = experiments.TrialConfig(n=n, m=2, h=1, P=17,
                                      trials=args.trials, seed=args.seed)
        reports.append(experiments.estimate_p4(cfg, jobs=args.jobs))
    for P in (5, 17, 61, 199):
        reports.append(
            experiments.estimate_p8(8, P, args.trials, args.seed,
                                    jobs=args.jobs))
    for n in (6, 8, 10):
        reports.append(
            experiments.spurious_convergent_stats(
                n, 2, 1, 17, args.trials, args.seed, jobs=args.jobs))

    table = experiments.format_frequency_table(reports)
    if args.out:
        pathlib.Path(args.out).write_text(table, encoding="ascii")
    else:
        sys.stdout.write(table)
    return 0


if __name__ == "__main__":
    sys.exit(main())
