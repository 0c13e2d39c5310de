"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 a size guard was exceeded without ``--force``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import bounds_report
from .core import (
    Format,
    GuardExceeded,
    InstanceError,
    FormatError,
    PlayerValues,
    balanced_format,
    count_formats,
    enumerate_formats,
    parse_format,
    parse_instance,
)
from .exact import EXACT_GUARD, TournamentEngine
from .montecarlo import estimate
from .optimize import (
    reproduce_counterexamples,
    search_formats,
    verify_special_case_theorems,
    verify_weakest_player_theorem,
)

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


def exact_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def approx(x) -> float:
    return round(float(x), 6)


def _num(x):
    """Lossless exact string plus display float."""
    if x is None:
        return None
    return {"exact": exact_str(x), "approx": approx(x)}


def _load_instance(args) -> PlayerValues:
    if args.values:
        return PlayerValues.from_values(tok for tok in args.values.split(","))
    if not args.instance:
        raise InstanceError("provide --instance FILE or --values V1,V2,...")
    if args.instance == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.instance).read_text()
        except OSError as exc:
            raise InstanceError(f"cannot read instance file: {exc}") from None
    return parse_instance(text)


def _load_format(args, pv: PlayerValues) -> Format:
    return parse_format(pv.n, args.format) if args.format else balanced_format(pv.n)


def _base_report(command: str, pv: PlayerValues | None, fmt: Format | None) -> dict:
    return {
        "command": command,
        "instance": pv.to_json() if pv else None,
        "format": list(fmt.rounds) if fmt else None,
        "metadata": {"version": __version__},
    }


# -- subcommands ---------------------------------------------------------

def cmd_analyze(args) -> tuple[int, dict]:
    pv = _load_instance(args)
    fmt = _load_format(args, pv)
    report = _base_report("analyze", pv, fmt)
    if args.mc or args.mode == "mc":
        est = estimate(pv, fmt, args.trials, args.seed, workers=args.workers)
        report["metadata"]["engine"] = "montecarlo"
        report["mc"] = {"trials": est.trials, "seed": est.seed,
                        "rngAlgorithm": est.rng_algorithm}
        report["results"] = {"perPlayer": [
            {"index": i + 1, "exact": None, "approx": approx(p),
             "winCount": c, "standardError": approx(se)}
            for i, (c, p, se) in enumerate(zip(est.win_counts, est.point_estimates,
                                               est.standard_errors))
        ]}
        return EXIT_OK, report
    engine = TournamentEngine(pv, force=args.force)
    rm = engine.reach_matrix(fmt)
    report["metadata"]["engine"] = "exact"
    report["results"] = {"perPlayer": [
        {"index": i + 1, **_num(rm.win[i]),
         "reach": [exact_str(x) for x in rm.reach[i]]}
        for i in range(pv.n)
    ]}
    return EXIT_OK, report


def cmd_bounds(args) -> tuple[int, dict]:
    pv = _load_instance(args)
    fmt = _load_format(args, pv)
    rep = bounds_report(pv, fmt)
    report = _base_report("bounds", pv, fmt)
    exact = None
    if pv.n <= EXACT_GUARD or args.force:
        exact = TournamentEngine(pv, force=True).win_probabilities(fmt)
        report["results"] = {"perPlayer": [
            {"index": i + 1, **_num(p)} for i, p in enumerate(exact)
        ]}
    report["metadata"]["engine"] = "exact" if exact else "none"
    report["bounds"] = {
        "surrogateGameCount": [exact_str(x) for x in rep.surrogate.pmf],
        "perPlayer": [
            {
                "index": b.index + 1,
                "meanOpponentWinProb": _num(b.mean_opponent_win_prob),
                "theorem1": _num(b.theorem1),
                "theorem1Kind": b.theorem1_kind,
                "thm2Upper": _num(b.thm2_upper),
                "thm3Lower": _num(b.thm3_lower),
                "weakLower": _num(b.weak_lower),
                "universalUpper": _num(b.universal_upper),
                "corollary2": b.corollary2,
            }
            for b in rep.players
        ],
    }
    return EXIT_OK, report


def cmd_optimize(args) -> tuple[int, dict]:
    pv = _load_instance(args)
    if not 1 <= args.player <= pv.n:
        raise InstanceError(f"--player must be in 1..{pv.n}")
    res = search_formats(pv, args.player - 1, args.objective, force=args.force)
    report = _base_report("optimize", pv, None)
    report["metadata"]["engine"] = "exact"
    report["search"] = {
        "player": args.player,
        "objective": args.objective,
        "table": [{"format": list(f.rounds), **_num(p)} for f, p in res.table],
        "argmax": [list(f.rounds) for f in res.argmax],
        "argmin": [list(f.rounds) for f in res.argmin],
        "conjectureEvidence": res.conjecture_evidence(),
    }
    return EXIT_OK, report


def cmd_formats(args) -> tuple[int, dict | str]:
    if args.n < 2:
        raise FormatError("--n must be at least 2")
    if args.count:
        return EXIT_OK, str(count_formats(args.n))
    fmts = enumerate_formats(args.n, force=args.force)
    report = _base_report("formats", None, None)
    report["formats"] = [list(f.rounds) for f in fmts]
    report["count"] = len(fmts)
    return EXIT_OK, report


def _verification_json(rep) -> dict:
    return {
        "suite": rep.suite,
        "passed": rep.passed,
        "checks": [{"name": c.name, "n": c.n, "passed": c.passed, "detail": c.detail}
                   for c in rep.checks],
    }


def cmd_verify(args) -> tuple[int, dict]:
    reports = []
    if args.suite in ("strongest", "all"):
        for p in args.p_strong:
            reports.append(verify_special_case_theorems(args.n_max, Fraction(p), force=args.force))
    if args.suite in ("weakest", "all"):
        for p in args.p_weak:
            reports.append(verify_weakest_player_theorem(args.n_max, Fraction(p), force=args.force))
    if args.suite in ("counterexamples", "all"):
        reports.append(reproduce_counterexamples())
    report = _base_report("verify", None, None)
    report["verification"] = [_verification_json(r) for r in reports]
    ok = all(r.passed for r in reports)
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), report


REPRO_CASES = ("n4-nonmonotone", "n6-halving")


def cmd_repro(args) -> tuple[int, dict]:
    rep = reproduce_counterexamples()
    cases = REPRO_CASES if args.case == "all" else (args.case,)
    report = _base_report("repro", None, None)
    report["cases"] = {
        name: {k: _num(v) for k, v in rep.observations[name].items()} for name in cases
    }
    wanted = {"n4-nonmonotone": 4, "n6-halving": 6}
    checks = [c for c in rep.checks if c.n in {wanted[name] for name in cases}]
    report["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
    ok = all(c.passed for c in checks)
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), report


# -- output --------------------------------------------------------------

def _csv_rows(report: dict):
    for row in (report.get("results") or {}).get("perPlayer", []):
        yield row["index"], "win", row["exact"], row["approx"]
        for s, val in enumerate(row.get("reach", []), start=1):
            yield row["index"], f"reach[{s}]", val, approx(Fraction(val))
        if "standardError" in row:
            yield row["index"], "standardError", None, row["standardError"]
    for row in (report.get("bounds") or {}).get("perPlayer", []):
        for key in ("theorem1", "thm2Upper", "thm3Lower", "weakLower", "universalUpper"):
            if row[key] is not None:
                yield row["index"], key, row[key]["exact"], row[key]["approx"]
    search = report.get("search")
    if search:
        for row in search["table"]:
            yield search["player"], "P[" + ",".join(map(str, row["format"])) + "]", row["exact"], row["approx"]
    for name, vals in (report.get("cases") or {}).items():
        for key, val in vals.items():
            yield name, key, val["exact"], val["approx"]


def render(report, out: str) -> str:
    if isinstance(report, str):
        return report + "\n"
    if out == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = list(_csv_rows(report))
    if out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["player", "quantity", "exact", "approx"])
        w.writerows(["" if x is None else x for x in r] for r in rows)
        return buf.getvalue()
    # aligned table
    lines = []
    if rows:
        table = [("player", "quantity", "exact", "approx")]
        table += [tuple("" if x is None else str(x) for x in r) for r in rows]
        widths = [max(len(r[c]) for r in table) for c in range(4)]
        lines += ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
    if "formats" in report:
        lines += [",".join(map(str, f)) for f in report["formats"]]
    for suite in report.get("verification", []):
        lines.append(f"{suite['suite']}: {'PASS' if suite['passed'] else 'FAIL'}")
        for c in suite["checks"]:
            tag = "ok  " if c["passed"] else "FAIL"
            lines.append(f"  {tag} n={c['n']} {c['name']}  {c['detail']}")
    for c in report.get("checks", []):
        lines.append(f"{'ok  ' if c['passed'] else 'FAIL'} {c['name']}  {c['detail']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knockout",
        description="Exact and simulated win probabilities for random knockout tournaments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_format=True):
        p.add_argument("--instance", help='JSON file {"values": [...]}, or - for stdin')
        p.add_argument("--values", help="comma-separated strengths, e.g. 6,4,3,1,1,1")
        if with_format:
            p.add_argument("--format", help='"balanced" (default), "sequential" or e.g. "2,2,1"')
        p.add_argument("--force", action="store_true", help="ignore size guards")
        p.add_argument("--out", choices=("json", "csv", "table"), default="json")

    p = sub.add_parser("analyze", help="win and reach probabilities")
    common(p)
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--mc", action="store_true", help="shorthand for --mode mc")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="analytic bounds next to exact values")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("optimize", help="exhaustive best/worst format search")
    common(p, with_format=False)
    p.add_argument("--player", type=int, default=1, help="1-based player index")
    p.add_argument("--objective", choices=("max", "min"), default="max")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("formats", help="list or count valid formats")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", choices=("json", "csv", "table"), default="json")
    p.set_defaults(func=cmd_formats)

    p = sub.add_parser("verify", help="run the best/worst format verification suites")
    p.add_argument("--suite", choices=("strongest", "weakest", "counterexamples", "all"),
                   default="all")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--p-strong", nargs="+", default=["3/5", "2/3", "3/4"])
    p.add_argument("--p-weak", nargs="+", default=["1/4", "1/3"])
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", choices=("json", "csv", "table"), default="table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repro", help="recompute the published counterexamples")
    p.add_argument("--case", choices=REPRO_CASES + ("all",), default="all")
    p.add_argument("--out", choices=("json", "csv", "table"), default="json")
    p.set_defaults(func=cmd_repro)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        code, report = args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=stderr)
        if args.command == "analyze":
            print("hint: rerun with --mc for a Monte Carlo estimate", file=stderr)
        return EXIT_GUARD
    except (InstanceError, FormatError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    stdout.write(render(report, args.out))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
