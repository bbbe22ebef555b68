"""Print the expected-EMD tables for equal bin counts.

Usage: python scripts/reproduce_tables.py [--nmax 10] [--dmax 10] [--digits 4]
"""
import argparse
import time

from gemd.cli import render_decimal
from gemd.genfunc import continuous_expected, unit_normalized_expected


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--dmax", type=int, default=10)
    ap.add_argument("--n", type=int, default=3, help="bin count for the normalized table")
    ap.add_argument("--digits", type=int, default=4)
    args = ap.parse_args()

    start = time.perf_counter()
    print(f"{'n':>3}  {'E(n,n)':>10}  {'E(n,n,n)':>10}  ratio")
    for n in range(2, args.nmax + 1):
        e2 = continuous_expected((n, n))
        e3 = continuous_expected((n, n, n))
        print(f"{n:>3}  {render_decimal(e2, args.digits):>10}  {render_decimal(e3, args.digits):>10}  {e3 / e2}")

    print(f"\nunit-normalized expectation, n={args.n}")
    print(f"{'d':>3}  value")
    for d in range(2, args.dmax + 1):
        print(f"{d:>3}  {render_decimal(unit_normalized_expected(d, args.n), args.digits)}")
    print(f"\n({time.perf_counter() - start:.2f}s)")


if __name__ == "__main__":
    main()
