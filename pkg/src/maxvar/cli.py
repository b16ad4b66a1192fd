"""Command-line front end.

Subcommands:

  count     lattice points of a dilated cross-polytope (optionally listed)
  maxfn     evaluate a maximal function on a box, CSV output
  constant  certified enclosure of a sharp constant
  verify    inequality checks for one input, or canned suites
  scan      two-point extremizer sweep, CSV output

Input grid functions are JSON documents

    {"dim": 2, "support": [{"point": [0, 0], "value": "3/2"}, ...]}

with values as exact rational strings.  Data goes to stdout (CSV with a
header row, or canonical JSON); diagnostics go to stderr.  Rationals are
serialised as canonical "p/q" strings, so outputs are byte-identical across
runs for fixed inputs and seeds.

Exit codes: 0 success, 1 property violation, 2 bad arguments or parse
failure, 3 enumeration cap exceeded, 4 geometry/dimension mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import constants, lattice, maxop, oracle, varanalysis, verify
from .exact import decimal_str, format_rational, parse_rational
from .gridfn import GridFunction
from .maxop import BallSpec

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

GEOMETRY_CHOICES = ("centered1d", "uncentered1d", "l1", "cube")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# GridFunction document I/O
# ---------------------------------------------------------------------------

def load_gridfn(path: str) -> GridFunction:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"{path}: JSON parse failure at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            EXIT_USAGE,
        )
    try:
        dim = int(doc["dim"])
        entries = doc["support"]
        if dim < 1:
            raise ValueError("dim must be >= 1")
        values: dict[tuple[int, ...], Fraction] = {}
        for i, entry in enumerate(entries):
            point = tuple(int(c) for c in entry["point"])
            if len(point) != dim:
                raise ValueError(f"support[{i}]: point has wrong dimension")
            if point in values:
                raise ValueError(f"support[{i}]: duplicate point {list(point)}")
            value = parse_rational(str(entry["value"]))
            if value == 0:
                raise ValueError(f"support[{i}]: zero value not allowed")
            values[point] = value
        return GridFunction(dim, values)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: invalid grid function document: {exc}", EXIT_USAGE)


def dump_gridfn(f: GridFunction) -> dict:
    return {
        "dim": f.dim,
        "support": [
            {"point": list(p), "value": format_rational(v)} for p, v in f.items()
        ],
    }


def _spec_for(geometry: str, dim: int) -> BallSpec:
    if geometry in ("centered1d", "uncentered1d") and dim != 1:
        raise CliError(
            f"geometry {geometry} requires a 1-D input, got dim {dim}", EXIT_MISMATCH
        )
    return BallSpec(geometry, dim)


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def cmd_count(args: argparse.Namespace) -> int:
    if args.dim < 1 or args.radius < 0:
        raise CliError("need --dim >= 1 and --radius >= 0", EXIT_USAGE)
    print(lattice.l1_ball_count(args.dim, args.radius))
    if args.enumerate:
        cap = _enum_cap()
        try:
            points = lattice.l1_ball_points(args.dim, args.radius, cap=cap)
        except lattice.EnumerationCapExceeded as exc:
            raise CliError(str(exc), EXIT_CAP)
        for p in points:
            print(" ".join(str(c) for c in p))
    return EXIT_OK


def _enum_cap() -> int:
    raw = os.environ.get("MAXVAR_ENUM_CAP")
    if raw is None:
        return lattice.DEFAULT_ENUM_CAP
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"MAXVAR_ENUM_CAP is not an integer: {raw!r}", EXIT_USAGE)


# ---------------------------------------------------------------------------
# maxfn
# ---------------------------------------------------------------------------

def cmd_maxfn(args: argparse.Namespace) -> int:
    f = load_gridfn(args.input)
    spec = _spec_for(args.geometry, f.dim)
    R = args.box
    if R < 0:
        raise CliError("--box must be >= 0", EXIT_USAGE)
    box = ((-R,) * f.dim, (R,) * f.dim)
    values = maxop.evaluate_on_box(f, spec, box, threads=args.threads)
    try:
        out = open(args.output, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc}", EXIT_USAGE)
    with out:
        writer = csv.writer(out)
        writer.writerow([f"n{i+1}" for i in range(f.dim)] + ["value", "decimal"])
        for point in sorted(values):
            v = values[point]
            writer.writerow(
                [str(c) for c in point] + [format_rational(v), decimal_str(v)]
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# constant
# ---------------------------------------------------------------------------

def cmd_constant(args: argparse.Namespace) -> int:
    kind = args.kind
    d = args.dim
    if kind == "centered" and d < 2:
        raise CliError(
            "centered constants need --dim >= 2 (the sharp 1-D centered "
            "constant is exactly 2)",
            EXIT_USAGE,
        )
    if d < 1:
        raise CliError("--dim must be >= 1", EXIT_USAGE)
    try:
        enc = constants.constant_enclosure(d, args.terms, kind)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    print(f"[{format_rational(enc.lower)}, {format_rational(enc.upper)}]")
    print(
        f"decimal: [{decimal_str(enc.lower, args.digits)}, "
        f"{decimal_str(enc.upper, args.digits)}]  "
        f"width {decimal_str(enc.width, args.digits)}"
    )
    print(f"tail majorant: {enc.majorant.statement}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite:
        return _run_suite(args)
    if not args.input or not args.geometry:
        raise CliError("verify needs --input and --geometry, or --suite", EXIT_USAGE)
    f = load_gridfn(args.input)
    if not f:
        raise CliError("input function is identically zero", EXIT_USAGE)
    spec = _spec_for(args.geometry, f.dim)
    epsilon = parse_rational(args.epsilon)
    record, report = verify.verify_inequality(
        f, spec, epsilon, r_max=args.rmax, terms=args.terms
    )
    payload = {
        "geometry": spec.geometry,
        "dim": spec.dim,
        "l1_norm": format_rational(record.l1_norm),
        "support_size": record.support_size,
        "is_delta": record.is_delta,
        "truncation_radius": record.truncation_radius,
        "var_lower_bound": format_rational(report.truncated_var),
        "ratio": format_rational(record.ratio),
        "bound_upper": format_rational(record.bound),
        "gap": format_rational(record.gap),
        "cap_satisfied": report.cap_satisfied,
        "stop_reason": report.stop_reason,
        "trace": [[r, format_rational(v)] for r, v in report.convergence_trace],
    }
    _emit_json(payload)
    ok = record.gap >= 0 and report.cap_satisfied
    print(
        f"{'PASS' if ok else 'FAIL'}: Var lower bound "
        f"{decimal_str(report.truncated_var, 6)} vs cap "
        f"{decimal_str(report.theoretical_cap, 6)} "
        f"(gap {decimal_str(record.gap, 6)})",
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_VIOLATION


def _check(name: str, ok: bool, checks: list, detail: dict | None = None) -> None:
    checks.append({"name": name, "status": "pass" if ok else "fail", **(detail or {})})
    print(f"{'PASS' if ok else 'FAIL'}: {name}", file=sys.stderr)


def _run_suite(args: argparse.Namespace) -> int:
    checks: list[dict] = []
    if args.suite == "lemmas":
        for d in range(1, 7):
            bad = lattice.check_log_concavity(d, 2000)
            detail = {"violations": [[k, str(a), str(b)] for k, a, b in bad[:10]]} if bad else None
            _check(f"log-concavity d={d} k<=2000", not bad, checks, detail)
        for d in range(1, 5):
            bad = lattice.check_gap_monotonicity(d, 500)
            detail = {"violations": [[k, str(a), str(b)] for k, a, b in bad[:10]]} if bad else None
            _check(f"gap monotonicity d={d} k<=500", not bad, checks, detail)
    elif args.suite == "sharpness":
        _sharpness_suite(checks)
    elif args.suite == "oracle":
        _oracle_suite(checks, seed=args.seed, instances=args.instances)
    else:
        raise CliError(f"unknown suite {args.suite!r}", EXIT_USAGE)
    all_pass = all(c["status"] == "pass" for c in checks)
    _emit_json({"suite": args.suite, "seed": args.seed, "all_pass": all_pass, "checks": checks})
    return EXIT_OK if all_pass else EXIT_VIOLATION


def _sharpness_suite(checks: list) -> None:
    R = 1000
    v = varanalysis.truncated_variation_maxfn(
        GridFunction.delta(0), BallSpec("centered1d", 1), R
    )
    _check(
        "centered 1-D delta variation matches closed form",
        v == 2 * (1 - Fraction(1, 2 * R + 1)),
        checks,
        {"value": format_rational(v)},
    )
    _check("centered 1-D delta variation stays below 2", v < 2, checks)
    v = varanalysis.delta_variation_closed_form("cube", 2, 200)
    _check(
        "cube d=2 delta variation at R=200 within (11.8, 12)",
        Fraction(59, 5) < v < 12,
        checks,
        {"value": format_rational(v)},
    )
    enc = constants.constant_enclosure(2, 1000, "uncentered")
    _check(
        "uncentered d=2 partial sums telescope",
        enc.lower == 12 - Fraction(8, 1001) and enc.upper == 12,
        checks,
    )
    ok = True
    for K in range(1, 41):
        totals = varanalysis.delta_line_cap_totals("l1", 2, K)
        partial = sum(tot for _count, tot in totals.values())
        ok = ok and partial == constants.centered_constant_partial(2, K)
    _check("l1 d=2 line-cap sums match series partial sums (K<=40)", ok, checks)


def _oracle_suite(checks: list, seed: int, instances: int) -> None:
    import random as _random

    rng = _random.Random(seed)
    agree = 0
    total = 0
    failures = []
    geometries = ("centered1d", "uncentered1d", "l1", "cube")
    for geometry in geometries:
        for i in range(instances):
            d = 1 if geometry.endswith("1d") else rng.choice((1, 2))
            if geometry == "l1" and d == 1:
                d = 2
            f = verify.random_gridfn(
                rng.randint(0, 10**9), d, 6, rng.randint(1, 5)
            )
            n = tuple(rng.randint(-8, 8) for _ in range(d))
            fast, slow = _fast_slow(f, geometry, n)
            total += 1
            if fast.value == slow.value and fast.region == slow.region:
                agree += 1
            else:
                failures.append(
                    {"geometry": geometry, "f": dump_gridfn(f), "point": list(n)}
                )
    _check(
        f"oracle equivalence {agree}/{total}",
        agree == total,
        checks,
        {"failures": failures},
    )


def _fast_slow(f: GridFunction, geometry: str, n: tuple[int, ...]):
    if geometry == "centered1d":
        reach = max((abs(p[0] - n[0]) for p in f.support), default=0) + 2
        return maxop.centered_max_1d(f, n[0]), oracle.brute_centered_1d(f, n[0], reach)
    if geometry == "uncentered1d":
        reach = max((abs(p[0] - n[0]) for p in f.support), default=0) + 2
        return maxop.uncentered_max_1d(f, n[0]), oracle.brute_uncentered_1d(
            f, n[0], reach
        )
    if geometry == "l1":
        reach = (
            max(
                (sum(abs(a - b) for a, b in zip(p, n)) for p in f.support), default=0
            )
            + 2
        )
        return maxop.centered_max_l1(f, n), oracle.brute_centered_l1(f, n, reach)
    bbox = f.support_box()
    span = 2
    if bbox is not None:
        span = (
            max(
                max(u, c) - min(l, c) + 1 for l, u, c in zip(bbox[0], bbox[1], n)
            )
            + 1
        )
    return maxop.uncentered_max_cube(f, n), oracle.brute_uncentered_cube(f, n, span)


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def cmd_scan(args: argparse.Namespace) -> int:
    if args.family != "two-point":
        raise CliError(f"unknown family {args.family!r}", EXIT_USAGE)
    dim = 1 if args.geometry.endswith("1d") else 2
    spec = BallSpec(args.geometry, dim)
    records = verify.scan_extremizers(
        spec, max_distance=args.radius, R=args.box, terms=args.terms
    )
    writer = csv.writer(sys.stdout)
    writer.writerow(
        [
            "geometry",
            "support",
            "support_size",
            "is_delta",
            "l1_norm",
            "truncation_radius",
            "ratio",
            "bound_upper",
            "gap",
        ]
    )
    for r in records:
        writer.writerow(
            [
                spec.geometry,
                ";".join(",".join(str(c) for c in p) for p in r.support),
                r.support_size,
                int(r.is_delta),
                format_rational(r.l1_norm),
                r.truncation_radius,
                format_rational(r.ratio),
                format_rational(r.bound),
                format_rational(r.gap),
            ]
        )
    if any(r.gap < 0 for r in records):
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxvar",
        description="exact computations and sharpness checks for discrete maximal functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="cross-polytope lattice point count")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--enumerate", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("maxfn", help="evaluate a maximal function on a box")
    p.add_argument("--input", required=True)
    p.add_argument("--geometry", choices=GEOMETRY_CHOICES, required=True)
    p.add_argument("--box", type=int, required=True, help="box radius R")
    p.add_argument("--output", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_maxfn)

    p = sub.add_parser("constant", help="certified constant enclosure")
    p.add_argument("--kind", choices=("centered", "uncentered"), required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="inequality checks / canned suites")
    p.add_argument("--input")
    p.add_argument("--geometry", choices=GEOMETRY_CHOICES)
    p.add_argument("--epsilon", default="1/1000")
    p.add_argument("--rmax", type=int, default=4096)
    p.add_argument("--terms", type=int, default=1000)
    p.add_argument("--suite", choices=("lemmas", "sharpness", "oracle"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=100, help="per geometry, oracle suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="extremizer family sweep")
    p.add_argument("--geometry", choices=GEOMETRY_CHOICES, required=True)
    p.add_argument("--family", default="two-point")
    p.add_argument("--radius", type=int, required=True, help="family max distance")
    p.add_argument("--box", type=int, required=True, help="truncation radius")
    p.add_argument("--terms", type=int, default=1000)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except lattice.EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
