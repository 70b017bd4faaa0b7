"""Command line front end.

Trees are given as bracket literals (``"((*,*),*)"``), as ``@path`` to a file
holding one, or as shorthands for the standard families: ``E<d>:<k>`` even
tree, ``H<d>:<n>`` strict even tree, ``C<d>:<h>`` complete tree and
``Cat:<k>`` binary caterpillar.

Every flag can also be set through an environment variable named after it,
e.g. ``INDUCIBILITY_D=3`` or ``INDUCIBILITY_CAP_TREES=50000``.

Exit codes: 0 success, 2 input error, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from decimal import Context, Decimal
from fractions import Fraction

from . import __version__
from .bounds import inducibility_report
from .counting import DEFAULT_SUBSET_CAP, count_copies, count_copies_bruteforce
from .errors import CapExceeded, InducibilityError
from .search import DEFAULT_TREE_CAP, conjecture_check, convergence_table, max_density, rows_to_csv
from .supremum import DEFAULT_TOL
from .trees import Tree, caterpillar, check_arity, complete_tree, even_tree, parse_tree, strict_even_tree

ENV_PREFIX = "INDUCIBILITY_"
EXIT_INPUT = 2
EXIT_CAP = 3

_SHORTHAND = re.compile(r"^(E|H|C)(\d+):(\d+)$|^Cat:(\d+)$", re.IGNORECASE)


def resolve_tree(spec: str) -> tuple[Tree, int | None]:
    """Tree for a literal, ``@file`` or shorthand; also returns the arity a shorthand implies."""
    spec = spec.strip()
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            return parse_tree(fh.read()), None
    m = _SHORTHAND.match(spec)
    if m is None:
        return parse_tree(spec), None
    if m.group(4) is not None:
        return caterpillar(int(m.group(4))), 2
    family, d, arg = m.group(1).upper(), int(m.group(2)), int(m.group(3))
    if d < 2:
        raise InducibilityError(f"arity must be at least 2 in {spec!r}")
    builder = {"E": even_tree, "H": strict_even_tree, "C": complete_tree}[family]
    return builder(d, arg), d


def _arity(args, *resolved: tuple[Tree, int | None]) -> int:
    if args.d is not None:
        d = args.d
    else:
        d = max([2] + [h for _, h in resolved if h] + [t.max_degree() for t, _ in resolved])
    for t, _ in resolved:
        check_arity(t, d)
    return d


def fmt_decimal(q: Fraction) -> str:
    ctx = Context(prec=12)
    return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))


def fmt_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _rational_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator), "decimal": fmt_decimal(q)}


def _emit(fmt: str, payload: dict, text_lines: list[str], csv_rows: list[list]) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        return buf.getvalue()
    return "\n".join(text_lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_count(args) -> str:
    T = resolve_tree(args.tree)
    D = resolve_tree(args.pattern)
    d = _arity(args, T, D)
    T, D = T[0], D[0]
    c = count_copies(D, T, d)
    brute = count_copies_bruteforce(D, T, cap=args.cap_subsets) if args.bruteforce else None
    if T.n_leaves >= D.n_leaves >= 1:
        gamma = Fraction(c, _binom(T.n_leaves, D.n_leaves))
    else:
        gamma = Fraction(0)
    payload = {
        "pattern": D.key, "tree": T.key, "d": d, "count": str(c),
        "density": _rational_json(gamma),
    }
    lines = [f"pattern  {D.key}", f"tree     {T.key}", f"d        {d}",
             f"count    {c}", f"density  {fmt_rational(gamma)} ({fmt_decimal(gamma)})"]
    header = ["pattern", "tree", "d", "count", "density_num", "density_den", "density"]
    row = [D.key, T.key, d, c, gamma.numerator, gamma.denominator, fmt_decimal(gamma)]
    if brute is not None:
        payload["bruteforce_count"] = str(brute)
        payload["agree"] = brute == c
        lines.append(f"brute    {brute} ({'agree' if brute == c else 'DISAGREE'})")
        header.append("bruteforce_count")
        row.append(brute)
    return _emit(args.format, payload, lines, [header, row])


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def cmd_bounds(args) -> str:
    D = resolve_tree(args.tree)
    d = _arity(args, D)
    report = inducibility_report(D[0], d, seed=args.seed, tol=args.tol)
    payload = report.to_dict()
    lines = [f"tree     {report.tree.key}", f"d        {d}", f"eta      {fmt_rational(report.eta)} ({fmt_decimal(report.eta)})"]
    rows = [["kind", "source", "value_num", "value_den", "value", "rigorous"]]
    for b in report.lower:
        lines.append(f"lower    {fmt_rational(b.value)} ({fmt_decimal(b.value)})  [{b.source}]")
        rows.append(["lower", b.source, b.value.numerator, b.value.denominator, fmt_decimal(b.value), True])
    for b in report.upper:
        if isinstance(b.value, Fraction):
            lines.append(f"upper    {fmt_rational(b.value)} ({fmt_decimal(b.value)})  [{b.source}]")
            rows.append(["upper", b.source, b.value.numerator, b.value.denominator, fmt_decimal(b.value), b.rigorous])
        else:
            lines.append(f"upper    ~{b.value!r}  [{b.source}, heuristic]")
            rows.append(["upper", b.source, "", "", repr(b.value), b.rigorous])
    if report.exact is not None:
        lines.append(f"exact    {fmt_rational(report.exact)} ({fmt_decimal(report.exact)})  [{report.certificate}]")
        rows.append(["exact", report.certificate, report.exact.numerator, report.exact.denominator,
                     fmt_decimal(report.exact), True])
    else:
        lines.append("exact    unknown")
    return _emit(args.format, payload, lines, rows)


def cmd_search(args) -> str:
    D = resolve_tree(args.pattern)
    d = _arity(args, D)
    res = max_density(D[0], d, args.n, strict=args.strict, cap=args.cap_trees)
    payload = {
        "pattern": res.D.key, "d": d, "n": res.n, "strict": res.strict,
        "max_count": str(res.max_count), "max_density": _rational_json(res.max_density),
        "argmax": [t.key for t in res.argmax], "trees_scanned": res.trees_scanned,
    }
    lines = [f"pattern      {res.D.key}", f"d            {d}", f"leaves       {res.n}",
             f"strict       {res.strict}", f"scanned      {res.trees_scanned}",
             f"max count    {res.max_count}",
             f"max density  {fmt_rational(res.max_density)} ({fmt_decimal(res.max_density)})"]
    lines += [f"argmax       {t.key}" for t in res.argmax]
    rows = [["n", "max_density_num", "max_density_den", "argmax"]]
    rows += [[res.n, res.max_density.numerator, res.max_density.denominator, t.key] for t in res.argmax]
    return _emit(args.format, payload, lines, rows)


def cmd_converge(args) -> str:
    D = resolve_tree(args.pattern)
    d = _arity(args, D)
    D = D[0]
    if args.reference is not None:
        reference = Fraction(args.reference)
        ref_source = "given"
    else:
        report = inducibility_report(D, d, seed=args.seed, tol=args.tol)
        reference = report.exact if report.exact is not None else report.eta
        ref_source = report.certificate or "eta"
    n_min = args.n_min if args.n_min is not None else (max(0, -(-(D.n_leaves - 1) // (d - 1))) if args.strict else D.n_leaves)
    rows = convergence_table(D, d, range(n_min, args.n_max + 1), reference,
                             strict=args.strict, cap=args.cap_trees)
    if args.format == "csv":
        return rows_to_csv(rows)
    payload = {
        "pattern": D.key, "d": d, "strict": args.strict,
        "reference": _rational_json(reference), "reference_source": ref_source,
        "rows": [
            {"n": r.n, "leaves": r.leaves, "max_density": _rational_json(r.max_density),
             "gap": _rational_json(r.gap), "n_times_gap": r.n_times_gap}
            for r in rows
        ],
    }
    lines = [f"reference {fmt_rational(reference)} ({ref_source})",
             f"{'n':>4} {'leaves':>6}  {'max density':>24}  {'gap':>14}  n*gap"]
    lines += [f"{r.n:>4} {r.leaves:>6}  {fmt_rational(r.max_density):>24}  {fmt_decimal(r.gap):>14}  {r.n_times_gap:.6g}"
              for r in rows]
    return _emit(args.format, payload, lines, [])


def cmd_conjecture(args) -> str:
    d = args.d if args.d is not None else 2
    rep = conjecture_check(d, args.k, args.n_max, cap=args.cap_trees)
    payload = {
        "d": d, "k": args.k, "n_max": args.n_max, "holds": rep.holds,
        "rows": [{"n": r.n, "max_count": str(r.max_count), "even_count": str(r.even_count),
                  "trees": r.n_trees, "holds": r.holds} for r in rep.rows],
        "counterexamples": [{"n": n, "tree": t.key, "count": str(c)} for n, t, c in rep.counterexamples],
    }
    lines = [f"{r.n:>4} trees={r.n_trees:<8} max={r.max_count:<12} even={r.even_count:<12} {'ok' if r.holds else 'FAIL'}"
             for r in rep.rows]
    if rep.holds:
        lines.append("no counterexample")
    else:
        lines += [f"counterexample n={n}: {t.key} has {c} copies" for n, t, c in rep.counterexamples]
    rows = [["n", "trees", "max_count", "even_count", "holds"]]
    rows += [[r.n, r.n_trees, r.max_count, r.even_count, r.holds] for r in rep.rows]
    return _emit(args.format, payload, lines, rows)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _env(name: str, default=None, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in {"1", "true", "yes", "on"}
    return cast(raw)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1e-3:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1e-3], got {value}")
    return value


def _arity_arg(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"arity must be at least 2, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=_arity_arg, default=_env("d", None, int),
                        help="arity (default: inferred from the trees, at least 2)")
    common.add_argument("--strict", action="store_true", default=_env("strict", False, bool),
                        help="restrict to strictly d-ary trees")
    common.add_argument("--bruteforce", action="store_true", default=_env("bruteforce", False, bool),
                        help="cross-check counts by subset enumeration")
    common.add_argument("--cap-subsets", type=_positive_int, default=_env("cap_subsets", DEFAULT_SUBSET_CAP, int))
    common.add_argument("--cap-trees", type=_positive_int, default=_env("cap_trees", DEFAULT_TREE_CAP, int))
    common.add_argument("--tol", type=_tolerance, default=_env("tol", DEFAULT_TOL, float))
    common.add_argument("--seed", type=int, default=_env("seed", 0, int))
    common.add_argument("--format", choices=["json", "csv", "text"], default=_env("format", "text"))

    parser = argparse.ArgumentParser(prog="inducibility", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="copies and density of a pattern in a tree")
    p.add_argument("tree")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", parents=[common], help="eta, lower/upper bounds and exact inducibility")
    p.add_argument("tree")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", parents=[common], help="maximum density over all n-leaf trees")
    p.add_argument("pattern")
    p.add_argument("--n", type=_positive_int, required=True, help="leaf count of the host trees")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("converge", parents=[common], help="gap table between max density and a reference")
    p.add_argument("pattern")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--reference", default=None,
                   help="reference value as a fraction (default: exact value if certified, else eta)")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("conjecture", parents=[common], help="check the even-tree maximizer conjecture")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InducibilityError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
