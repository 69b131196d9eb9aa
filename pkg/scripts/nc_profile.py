"""Per-index maximum of k0/r over accepted non-canonical lemma instances, as CSV.

    python scripts/nc_profile.py --r-max 60 [--no-star] > nc_profile.csv
"""
import argparse
import csv
import sys

from mldlab.arith import render_rational
from mldlab.lemmas import nc_scan_r
from mldlab.parallel import ordered_map


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--r-max", type=int, default=60)
    p.add_argument("--no-star", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    rows = ordered_map(nc_scan_r, [(r, not args.no_star) for r in range(2, args.r_max + 1)], args.jobs)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["r", "accepted", "max_bound", "example", "k0", "branch"])
    for r, pairs in zip(range(2, args.r_max + 1), rows):
        acc = [(h, v) for h, v in pairs if v.accepted]
        if not acc:
            w.writerow([r, 0, "", "", "", ""])
            continue
        h, v = max(acc, key=lambda hv: (hv[1].bound, [-x for x in hv[0].a]))
        w.writerow([r, len(acc), render_rational(v.bound), str(h), v.k0, v.branch])


if __name__ == "__main__":
    main()
