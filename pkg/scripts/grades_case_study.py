"""Compare grade distributions across course sections.

Runs on the two bundled tables by default, or on any CSV with a header row
``label,<grade>,...`` and one row of counts per section.
"""
import argparse

from gemd.analysis import BUNDLED_TABLES, bundled_table, grade_report, read_grade_csv
from gemd.cli import render_decimal
from gemd.genfunc import unit_normalized_expected


def load(name):
    return bundled_table(name) if name in BUNDLED_TABLES else read_grade_csv(name)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("tables", nargs="*", default=list(BUNDLED_TABLES))
    ap.add_argument("--digits", type=int, default=6)
    args = ap.parse_args()

    for name in args.tables:
        g = load(name)
        r = grade_report(g)
        print(f"== {name}: {len(r.names)} sections, grades {','.join(r.labels)}, mass {r.mass}")
        masses = {sum(c) for _, c in g.sections}
        if len(masses) > 1:
            print(f"   section masses {sorted(masses)} rescaled to {r.mass}")
        for w in r.warnings:
            print(f"   warning: {w}")
        print(f"   discrete EMD      {r.discrete}")
        print(f"   continuous EMD    {render_decimal(r.continuous, args.digits)}")
        print(f"   unit-normalized   {render_decimal(r.normalized, args.digits)}")
        if r.expected_normalized is not None:
            print(f"   expected (random) {render_decimal(r.expected_normalized, args.digits)}")
    if len(r.names) >= 2 and r.labels:
        d, n = len(r.names), len(r.labels)
        print(f"\nbaseline for d={d}, n={n}: {render_decimal(unit_normalized_expected(d, n), args.digits)}")


if __name__ == "__main__":
    main()
