"""Exclusion replay broken down by family and status.

    python scripts/replay_table.py --r 14..40 --delta 1/19
"""
import argparse
from collections import Counter

from mldlab.arith import parse_rational
from mldlab.exclusion import replay_exclusions


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--r", default="14..40")
    p.add_argument("--delta", default="1/19")
    p.add_argument("--degree-bound", type=int, default=12)
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    lo, hi = map(int, args.r.split(".."))
    s = replay_exclusions(lo, hi, parse_rational(args.delta), args.degree_bound, jobs=args.jobs)
    table = Counter((fam, rep.status) for fam, rep in s.reports)
    branches = Counter(fam for fam, rep in s.reports for _ in rep.branches)
    statuses = sorted({st for _, st in table})
    print(f"{'family':12}" + "".join(f"{st:>18}" for st in statuses) + f"{'branches':>10}")
    for fam in sorted({f for f, _ in table}):
        print(f"{fam:12}" + "".join(f"{table[fam, st]:>18}" for st in statuses) + f"{branches[fam]:>10}")
    print("totals", dict(s.counts))


if __name__ == "__main__":
    main()
