"""Command-line front end: ``qpl coeffs``, ``qpl verify`` and ``qpl conjecture``.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 when every check
passes, 1 on a verification failure, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from qpl import battery
from qpl import fnfamily as fam
from qpl.fnfamily import FamilyParams
from qpl.qcore import Series, eval_x_one
from qpl.report import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILIES = {
    "F": "finite double sum F_N(i,j,k;x)",
    "Finf": "infinite double sum F(i,k;x)",
    "f": "the one-variable sequence f_N",
    "b": "b_N = F_(N-1)(0,1,1;1) - q^(N-1) F_(N-2)(0,1,1;1)",
    "overgf": "overpartition generating function with x counting parts",
}


class UsageError(Exception):
    pass


# -- coeffs ----------------------------------------------------------------------

def _family_series(args) -> Series:
    name = args.family
    if name == "F":
        if args.N < 0:
            return Series.zero(args.T if args.T is not None else 0)
        return fam.f_upper_N(FamilyParams(args.i, args.j, args.k, args.N), args.T)
    T = args.T if args.T is not None else battery.default_T()
    if name == "Finf":
        return fam.f_infinite(args.i, args.k, T)
    if name == "overgf":
        return fam.overpartition_gf(args.i, args.k, T)
    if args.N < 0:
        return Series.zero(args.T if args.T is not None else 0)
    if name == "f":
        return fam.f_small(args.N, args.T)
    return fam.b_seq(args.N, args.T)


def _apply_x(s: Series, mode: str) -> Series:
    if mode == "1":
        return eval_x_one(s)
    if mode == "0":
        return Series(s.trunc, {0: s.row(0)})
    return s


def _x_term(c: int, e: int) -> str:
    if e == 0:
        return str(c)
    power = "x" if e == 1 else f"x^{e}"
    return {1: power, -1: "-" + power}.get(c, f"{c}*{power}")


def _coeff_table(s: Series) -> str:
    if s.x_free():
        coeffs = s.coefficients()
        width = max(len(str(s.trunc)), 1)
        return "\n".join(f"q^{d:<{width}}  {c}" for d, c in enumerate(coeffs))
    width = len(str(s.trunc))
    lines = []
    for d in range(s.trunc + 1):
        terms = sorted(s.coeff(d), reverse=True)
        text = " + ".join(_x_term(c, e) for e, c in terms) or "0"
        lines.append(f"q^{d:<{width}}  {text.replace('+ -', '- ')}")
    return "\n".join(lines)


def cmd_coeffs(args) -> int:
    try:
        s = _apply_x(_family_series(args), args.x)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        print(json.dumps({"family": args.family, **s.to_dict()}))
    else:
        print(f"# {FAMILIES[args.family]}, truncated at q^{s.trunc}")
        print(_coeff_table(s))
    return EXIT_OK


# -- verify ----------------------------------------------------------------------

def _select(names: list[str]) -> list[str]:
    if not names or names == ["all"]:
        return list(battery.CHECKS)
    unknown = [n for n in names if n not in battery.CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; available: all, {', '.join(battery.CHECKS)}")
    return list(dict.fromkeys(names))


def _run_one(job: tuple[str, battery.RunConfig]) -> list[Report]:
    name, cfg = job
    return battery.run_check(name, cfg)


def run_checks(names: list[str], cfg: battery.RunConfig, jobs: int = 1) -> dict[str, list[Report]]:
    """Run the named checks; results keep the order of ``names`` whatever ``jobs`` is."""
    work = [(n, cfg) for n in names]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    return dict(zip(names, results))


def errata(results: dict[str, list[Report]]) -> list[dict]:
    """Every resolution record, deduplicated by item, in report order."""
    seen: dict[str, dict] = {}
    for reports in results.values():
        for rep in reports:
            if rep.resolution is not None and rep.resolution.item not in seen:
                seen[rep.resolution.item] = rep.resolution.to_dict()
    return list(seen.values())


def _format_table(rows: list[dict]) -> list[str]:
    keys = list(rows[0])
    widths = {k: max(len(k), *(len(str(r.get(k, ""))) for r in rows)) for k in keys}
    out = ["    " + "  ".join(k.rjust(widths[k]) for k in keys)]
    out += ["    " + "  ".join(str(r.get(k, "")).rjust(widths[k]) for k in keys) for r in rows]
    return out


def render_text(results: dict[str, list[Report]]) -> str:
    lines = []
    total = passed = 0
    for name, reports in results.items():
        lines.append(f"[{name}]")
        for rep in reports:
            total += 1
            passed += rep.passed
            lines.append("  " + rep.summary())
            verdict = rep.details.get("verdict")
            if verdict:
                lines.append(f"    {verdict}")
            table = rep.details.get("table")
            if isinstance(table, list) and table and isinstance(table[0], dict):
                lines.extend(_format_table(table))
    fixes = errata(results)
    if fixes:
        lines.append("")
        lines.append("errata (printed form vs what the computation supports):")
        for r in fixes:
            chosen = r["chosen"] if r["chosen"] is not None else "unresolved"
            lines.append(f"  - {r['item']}: printed {r['printed']!r}, chosen {chosen!r}")
            for cand, outcome in r["candidates"].items():
                lines.append(f"      {cand}: {outcome}")
            if r["note"]:
                lines.append(f"      ({r['note']})")
    lines.append("")
    lines.append(f"summary: {passed}/{total} PASS")
    return "\n".join(lines)


def render_json(results: dict[str, list[Report]], cfg: battery.RunConfig) -> str:
    doc = {
        "config": {"T": cfg.T, "N_max": cfg.N_max, "n_max": cfg.n_max, "i": cfg.i, "j": cfg.j, "k": cfg.k},
        "checks": {name: [r.to_dict() for r in reps] for name, reps in results.items()},
        "errata": errata(results),
        "passed": all(r.passed for reps in results.values() for r in reps),
    }
    return json.dumps(doc, indent=2, default=str)


def _config(args) -> battery.RunConfig:
    try:
        T = args.T if args.T is not None else battery.default_T()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for flag in ("T", "n_max", "N", "i", "j", "k"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            raise UsageError(f"--{flag.replace('_', '-')} must be non-negative")
    if args.n_max is not None and args.n_max > battery.comb.ENUM_LIMIT:
        raise UsageError(f"--n-max is capped at {battery.comb.ENUM_LIMIT}")
    return battery.RunConfig(T=T, N_max=args.N if args.N is not None else 40,
                             n_max=args.n_max if args.n_max is not None else 18,
                             i=args.i, j=args.j, k=args.k)


def cmd_verify(args) -> int:
    names = _select(args.checks)
    cfg = _config(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        results = run_checks(names, cfg, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(render_json(results, cfg) if args.format == "json" else render_text(results))
    ok = all(r.passed for reps in results.values() for r in reps)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_conjecture(args) -> int:
    try:
        T = args.T if args.T is not None else battery.default_T()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if T < 0:
        raise UsageError("--T must be non-negative")
    if args.perturb_at is not None and not 0 <= args.perturb_at <= T:
        raise UsageError("--perturb-at must lie in 0..T")
    rep = battery.conjecture_report(T, args.perturb_at)
    if args.format == "json":
        print(rep.to_json(indent=2))
    else:
        print(rep.summary())
        print(rep.details["verdict"])
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--T", type=int, default=None, help="truncation order (default: QPL_DEFAULT_T or 100)")

    c = sub.add_parser("coeffs", parents=[common], help="print the coefficients of a series")
    c.add_argument("family", choices=list(FAMILIES))
    c.add_argument("--i", type=int, default=0)
    c.add_argument("--j", type=int, default=1)
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--N", type=int, default=0)
    c.add_argument("--x", choices=("0", "1", "tracked"), default="tracked",
                   help="set x to 0 or 1, or keep it as a second variable")
    c.set_defaults(func=cmd_coeffs)

    v = sub.add_parser("verify", parents=[common], help="run verification checks")
    v.add_argument("checks", nargs="*", metavar="CHECK", help=f"all, or any of: {', '.join(battery.CHECKS)}")
    v.add_argument("--n-max", type=int, default=None, help="largest n for brute-force enumeration (default 18)")
    v.add_argument("--N", type=int, default=None, help="largest N for recurrences (default 40)")
    v.add_argument("--i", type=int, default=None)
    v.add_argument("--j", type=int, default=None)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("conjecture", parents=[common], help="compare both sides of the open identity")
    q.add_argument("--perturb-at", type=int, default=None,
                   help="add 1 to the product side at this q-degree (negative control)")
    q.set_defaults(func=cmd_conjecture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qpl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
