"""Running maximum of mld below 1 (dimension 3) and below 2 (dimension 5) as r grows.

    python scripts/gap_profile.py --r3 100 --r5 13
"""
import argparse
from fractions import Fraction

from mldlab.arith import render_rational
from mldlab.toric import scan3_r, scan5_r


def profile(scan, r_max: int, threshold: Fraction, label: str) -> None:
    best = None
    for r in range(2, r_max + 1):
        hits = scan(r, threshold)
        top = max((res.value for _, res in hits), default=None)
        if top is not None and (best is None or top > best[0]):
            best = (top, r, [str(cls.canonical) for cls, res in hits if res.value == top])
            print(f"{label} r={r}: new max {render_rational(top)} at {', '.join(best[2])}")
    print(f"{label}: max below bound for r <= {r_max} is {render_rational(best[0]) if best else 'none'}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--r3", type=int, default=100)
    p.add_argument("--r5", type=int, default=13)
    args = p.parse_args()
    profile(scan3_r, args.r3, Fraction(1, 2), "dim3")
    profile(scan5_r, args.r5, Fraction(3, 2), "dim5")


if __name__ == "__main__":
    main()
