"""Command-line entry point: ``gemd {emd,expected,histogram,monge,grades}``.

Exit codes: 0 success, 2 usage error, 3 capacity exceeded, 4 data error.
"""
from __future__ import annotations

import argparse
import json
import sys
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import numpy as np

from .analysis import (
    BUNDLED_TABLES,
    GradeTable,
    bundled_table,
    emd_histogram,
    grade_report,
    read_grade_csv,
    rescale_common_mass,
)
from .core import (
    DEFAULT_DENSE_CAP,
    BinShape,
    CapacityError,
    CostArray,
    DataError,
    GemdError,
    build_cost_array,
    monge_check_planes,
)
from .genfunc import continuous_expected, discrete_expected, unit_normalized_expected
from .transport import (
    DistTuple,
    continuous_emd,
    discrete_emd,
    greedy_joint,
    max_emd,
)

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_DATA = 0, 2, 3, 4
DEFAULT_DIGITS = 6


def render_decimal(q: Fraction, digits: int = DEFAULT_DIGITS) -> str:
    """Exact half-up rounding of ``q`` to ``digits`` places."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = 60
        value = Decimal(q.numerator) / Decimal(q.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP))


def rational(q: Fraction | None, digits: int) -> dict | None:
    if q is None:
        return None
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "decimal": render_decimal(q, digits)}


def parse_dists(text: str) -> list[tuple[int, ...]]:
    """``"4,0,1;1,2,2"`` -> ``[(4, 0, 1), (1, 2, 2)]``."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(tuple(int(x) for x in part.split(",")))
        except ValueError:
            raise DataError(f"cannot parse distribution {part!r}") from None
    return out


def read_monge_csv(path) -> CostArray:
    try:
        lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DataError("empty array file")
    try:
        if lines[0].startswith("shape:"):
            sizes = tuple(int(x) for x in lines[0][len("shape:"):].split(","))
            flat = [int(x) for ln in lines[1:] for x in ln.replace(",", " ").split()]
            shape = BinShape(sizes)
            if len(flat) != shape.cells:
                raise DataError(f"expected {shape.cells} entries, found {len(flat)}")
            return CostArray(shape, np.array(flat, dtype=np.int64).reshape(sizes))
        rows = [[int(x) for x in ln.split(",")] for ln in lines]
    except ValueError as exc:
        raise DataError(f"cannot parse array: {exc}") from None
    if len({len(r) for r in rows}) != 1:
        raise DataError("ragged rows")
    return CostArray.from_nested(rows)


def cmd_emd(args) -> dict:
    if args.dists:
        members = parse_dists(args.dists)
    else:
        table = read_grade_csv(args.csv)
        members = [c for _, c in table.sections]
    if len(members) < 2:
        raise DataError("need at least two distributions")
    if len({len(m) for m in members}) != 1:
        raise DataError(f"distributions have different bin counts: {[len(m) for m in members]}")
    masses = [sum(m) for m in members]
    rescaled = False
    if len(set(masses)) != 1:
        if not args.rescale:
            raise DataError(f"masses differ ({masses}); pass --rescale to equalize")
        table = GradeTable(
            tuple(f"bin-{k}" for k in range(1, len(members[0]) + 1)),
            tuple((f"m{i}", m) for i, m in enumerate(members, 1)),
        )
        t = rescale_common_mass(table)
        rescaled = True
    else:
        t = DistTuple.of(*members)
    n = len(members[0])
    top = max_emd(t.d, n)
    cont = continuous_emd(t) if t.mass else Fraction(0)
    out = {
        "d": t.d,
        "n": n,
        "s": t.mass,
        "rescaled": rescaled,
        "distributions": [list(m.bins) for m in t],
        "discrete": discrete_emd(t),
        "continuous": rational(cont, args.digits),
        "normalized": rational(cont / top, args.digits) if top else None,
    }
    if args.plan:
        out["plan"] = [{"cell": list(m), "weight": w} for m, w in greedy_joint(t).support]
    return out


def cmd_expected(args) -> dict:
    d, n = args.d, args.n
    if d < 1 or n < 1:
        raise DataError("d and n must be positive")
    if args.table:
        rows = []
        for k in range(2, args.table + 1):
            e = continuous_expected((k,) * d)
            rows.append(
                {
                    "n": k,
                    "expected": rational(e, args.digits),
                    "normalized": rational(unit_normalized_expected(d, k), args.digits)
                    if d >= 2
                    else None,
                }
            )
        return {"d": d, "table": rows}
    if args.discrete is not None:
        return {
            "d": d,
            "n": n,
            "s": args.discrete,
            "discrete_expected": rational(discrete_expected((n,) * d, args.discrete), args.digits),
        }
    e = continuous_expected((n,) * d)
    out = {
        "d": d,
        "n": n,
        "expected": rational(e, args.digits),
        "normalized": rational(unit_normalized_expected(d, n), args.digits)
        if d >= 2 and n >= 2
        else None,
    }
    return out


def cmd_histogram(args) -> dict:
    h = emd_histogram(args.d, args.n, args.s, budget=args.budget, via_genfunc=args.via_genfunc)
    skew, degenerate = h.skewness()
    return {
        "d": h.d,
        "n": h.n,
        "s": h.s,
        "method": "genfunc" if args.via_genfunc else "enumeration",
        "counts": [[r, c] for r, c in h.counts.items()],
        "total": h.total,
        "mean": rational(h.mean, args.digits),
        "skewness": round(skew, args.digits),
        "degenerate": degenerate,
    }


def cmd_monge(args) -> dict:
    if args.builtin:
        d, n = args.builtin
        a = build_cost_array((n,) * d, cap=args.cap)
        source = f"builtin d={d} n={n}"
    elif args.array:
        a = read_monge_csv(args.array)
        if a.shape.cells > args.cap:
            raise CapacityError(f"{a.shape.cells} cells exceed the dense cap of {args.cap}")
        source = str(args.array)
    else:
        raise DataError("give --builtin D N or --array PATH")
    res = monge_check_planes(a)
    return {
        "source": source,
        "shape": list(a.shape.sizes),
        "monge": res.holds,
        "witness": [list(res.witness[0]), list(res.witness[1])] if res.witness else None,
    }


def cmd_grades(args) -> dict:
    if args.path in BUNDLED_TABLES:
        g = bundled_table(args.path)
    else:
        g = read_grade_csv(args.path)
    r = grade_report(g)
    for w in r.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return {
        "sections": list(r.names),
        "labels": list(r.labels),
        "d": r.rescaled.d,
        "n": len(r.labels),
        "s": r.mass,
        "rescaled": [list(m.bins) for m in r.rescaled],
        "discrete": r.discrete,
        "continuous": rational(r.continuous, args.digits),
        "normalized": rational(r.normalized, args.digits),
        "expected_normalized": rational(r.expected_normalized, args.digits),
        "ratio": rational(r.ratio, args.digits),
        "warnings": list(r.warnings),
    }


def emit(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict) and "num" in value:
            value = f"{value['num']}/{value['den']} ({value['decimal']})"
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + json.dumps(v, sort_keys=True) for v in value)
            continue
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS)

    p = argparse.ArgumentParser(prog="gemd", description="Generalized earth mover's distance.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("emd", parents=[common], help="EMD of d histograms")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--dists", help='inline histograms, e.g. "4,0,1;1,2,2;0,5,0"')
    src.add_argument("--csv", help="grade-table CSV with one histogram per line")
    e.add_argument("--rescale", action="store_true", help="equalize masses first")
    e.add_argument("--plan", action="store_true", help="also print the chain-supported plan")
    e.set_defaults(func=cmd_emd)

    x = sub.add_parser("expected", parents=[common], help="expected EMD of random distributions")
    x.add_argument("-d", type=int, required=True)
    x.add_argument("-n", type=int, required=True)
    x.add_argument("--normalized", action="store_true", help="report the unit-normalized value")
    x.add_argument("--table", type=int, metavar="NMAX", help="table for n = 2..NMAX")
    x.add_argument("--discrete", type=int, metavar="S", help="expected discrete EMD at mass S")
    x.set_defaults(func=cmd_expected)

    h = sub.add_parser("histogram", parents=[common], help="distribution of discrete EMD values")
    h.add_argument("-d", type=int, required=True)
    h.add_argument("-n", type=int, required=True)
    h.add_argument("-s", type=int, required=True)
    h.add_argument("--via-genfunc", action="store_true")
    h.add_argument("--budget", type=int, default=None, help="enumeration budget (tuples)")
    h.add_argument("--csv", action="store_true", help="print 'emd,count' rows only")
    h.set_defaults(func=cmd_histogram)

    m = sub.add_parser("monge", parents=[common], help="check the Monge property")
    m.add_argument("--builtin", type=int, nargs=2, metavar=("D", "N"))
    m.add_argument("--array", help="CSV array file")
    m.add_argument("--cap", type=int, default=DEFAULT_DENSE_CAP)
    m.set_defaults(func=cmd_monge)

    g = sub.add_parser("grades", parents=[common], help="report on a grade table")
    g.add_argument("path", help=f"CSV path or one of {', '.join(BUNDLED_TABLES)}")
    g.set_defaults(func=cmd_grades)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DataError, GemdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.command == "expected" and args.normalized and "normalized" in payload:
        payload = {k: payload[k] for k in ("d", "n", "normalized")}
    if args.command == "histogram" and args.csv:
        print("emd,count")
        for r, c in payload["counts"]:
            print(f"{r},{c}")
        return EXIT_OK
    print(emit(payload, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
