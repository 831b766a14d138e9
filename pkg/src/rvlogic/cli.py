"""Command-line front end.

Exit codes: 0 for an affirmative verdict (SAT, ENTAILED, PROVED, suite
passed), 1 for a negative one, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .corpus import gen_ksat, stress_sentences, write_fixtures
from .decide import check_entails, check_sat, prove_on_grid
from .finite import EngineError
from .formula import ParseError, format_rational, to_text
from .semantics import Logic
from .solver import SolverError, SolverLimitError
from .suites import SUITES
from .theory import Theory, TheoryError, format_theory, parse_theory

AFFIRMATIVE = {"SAT", "ENTAILED", "PROVED", "PASS"}


def _fmt_model(model: dict[str, Fraction] | None) -> dict[str, str] | None:
    if model is None:
        return None
    return {k: format_rational(v) for k, v in sorted(model.items())}


def _stats(stats, elapsed: float) -> dict:
    return {"booleans": stats.booleans, "nodes": stats.nodes, "pivots": stats.pivots, "elapsed": round(elapsed, 6)}


def _solver_options(args) -> dict:
    opts = {"node_limit": args.node_limit, "time_limit": args.time_limit, "strategy": args.strategy}
    if args.trace:
        opts["trace"] = lambda line: print(line, file=sys.stderr)
    return opts


def _load(args):
    text = Path(args.file).read_text(encoding="utf-8")
    logic = Logic.parse(args.logic) if args.logic else None
    return parse_theory(text, logic)


def cmd_sat(args) -> dict:
    tf = _load(args)
    start = time.perf_counter()
    r = check_sat(tf.theory, **_solver_options(args))
    return {
        "command": "sat",
        "logic": tf.theory.logic.value,
        "verdict": "SAT" if r.satisfiable else "UNSAT",
        "witness": _fmt_model(r.model),
        "stats": _stats(r.stats, time.perf_counter() - start),
    }


def cmd_entails(args) -> dict:
    tf = _load(args)
    if not tf.query:
        raise TheoryError("the file has no query line")
    start = time.perf_counter()
    r = check_entails(tf.theory, tf.query, args.complement, **_solver_options(args))
    components = [
        {
            "query": f"{to_text(c.query.formula)} in {c.query.values}",
            "verdict": "ENTAILED" if c.entailed else "NOT_ENTAILED",
            "witness": _fmt_model(c.countermodel),
            "nodes": c.stats.nodes,
        }
        for c in r.components
    ]
    stats = {
        "booleans": max(c.stats.booleans for c in r.components),
        "nodes": sum(c.stats.nodes for c in r.components),
        "pivots": sum(c.stats.pivots for c in r.components),
        "elapsed": round(time.perf_counter() - start, 6),
    }
    return {
        "command": "entails",
        "logic": tf.theory.logic.value,
        "verdict": "ENTAILED" if r.entailed else "NOT_ENTAILED",
        "witness": _fmt_model(r.countermodel),
        "components": components,
        "stats": stats,
    }


def cmd_prove(args) -> dict:
    tf = _load(args)
    if not tf.query:
        raise TheoryError("the file has no query line")
    start = time.perf_counter()
    r = prove_on_grid(tf.theory, tf.query, args.domain, args.max_tuples)
    report = {
        "command": "prove",
        "logic": tf.theory.logic.value,
        "domain": args.domain,
        "verdict": "PROVED" if r.proved else "REFUTED",
        "witness": None,
        "proof": None,
        "stats": {"elapsed": round(time.perf_counter() - start, 6)},
    }
    if r.proved:
        report["proof"] = r.derivation.log_lines()
        report["stats"]["steps"] = len(r.derivation.steps)
    else:
        report["witness"] = _fmt_model(r.refutation.model)
        report["tuple"] = [format_rational(v) for v in r.refutation.values]
    return report


def cmd_gen(args) -> str:
    logic = Logic.parse(args.logic) if args.logic else Logic.LUKASIEWICZ
    if args.family == "ksat":
        theory = gen_ksat(args.k, args.drop, args.constrain, logic)
        note = f"{args.k}-SAT, clauses at value 1"
        if args.drop is not None:
            note += f", clause {args.drop} dropped"
        if args.constrain:
            note += ", atoms near 0 or 1"
        return format_theory(theory, comment=note)
    if args.family == "stress":
        query, sentences = stress_sentences(args.count)
        return format_theory(Theory(logic, sentences), [query], comment=f"stress test with {args.count} open intervals")
    paths = write_fixtures(args.out)
    return f"wrote {len(paths)} files to {args.out}\n"


def cmd_suite(args) -> dict:
    options = _solver_options(args)
    runner = SUITES[args.name]
    if args.name == "ksat":
        results = runner(args.min_k, args.max_k, **options)
    elif args.name == "stress":
        results = runner(args.count, **options)
    else:
        results = runner(**options)
    start = time.perf_counter()
    cases = []
    for res in results:
        cases.append(res)
        if not args.json:
            mark = "ok" if res.ok else "MISMATCH"
            print(f"{res.suite} {res.name}: expected {res.expected}, got {res.got} "
                  f"[{mark}] {res.elapsed:.3f}s nodes={res.nodes}", flush=True)
    elapsed = time.perf_counter() - start
    failures = [c.name for c in cases if not c.ok]
    over_budget = args.budget is not None and elapsed > args.budget
    return {
        "command": "suite",
        "suite": args.name,
        "verdict": "PASS" if not failures and not over_budget else "FAIL",
        "cases": len(cases),
        "failures": failures,
        "over_budget": over_budget,
        "results": [
            {"name": c.name, "expected": c.expected, "got": c.got, "elapsed": round(c.elapsed, 6), "nodes": c.nodes}
            for c in cases
        ],
        "stats": {"elapsed": round(elapsed, 6)},
    }


def _print_human(report: dict) -> None:
    cmd = report["command"]
    if cmd == "suite":
        status = report["verdict"]
        print(f"suite {report['suite']}: {report['cases']} cases, {len(report['failures'])} mismatches, "
              f"{report['stats']['elapsed']:.2f}s total -> {status}")
        if report["over_budget"]:
            print("time budget exceeded")
        return
    print(report["verdict"])
    for comp in report.get("components", []) if len(report.get("components", [])) > 1 else []:
        print(f"  {comp['query']}: {comp['verdict']}")
    if report.get("witness"):
        label = "countermodel" if report["verdict"] != "SAT" else "model"
        print(f"{label}: " + ", ".join(f"{k} = {v}" for k, v in report["witness"].items()))
    if report.get("tuple"):
        print("excluded tuple: (" + ", ".join(report["tuple"]) + ")")
    if report.get("proof"):
        print("proof:")
        for i, line in enumerate(report["proof"]):
            print(f"  {i}: {line}")
    stats = report.get("stats", {})
    if stats:
        print("stats: " + " ".join(f"{k}={v}" for k, v in stats.items()))


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--logic", default=default(None), help="lukasiewicz or goedel; overrides the file")
    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable report")
    parser.add_argument("--node-limit", type=int, default=default(None), help="branch-and-bound node limit")
    parser.add_argument("--time-limit", type=float, default=default(None), help="solver time limit in seconds")
    parser.add_argument("--trace", action="store_true", default=default(False),
                        help="one line per branch-and-bound node on stderr")
    parser.add_argument("--strategy", choices=["auto", "groups", "boolean"], default=default("auto"),
                        help="interval selectors as disjunctive domains (groups) or big-M booleans")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rvlogic", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sat", parents=[common], help="satisfiability of a theory file")
    p.add_argument("file")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("entails", parents=[common], help="entailment of the file's query")
    p.add_argument("file")
    p.add_argument("--complement", choices=["intervals", "sides"], default="intervals",
                   help="encode the negated query as complement intervals or as left/right choices")
    p.set_defaults(func=cmd_entails)

    p = sub.add_parser("prove", parents=[common], help="canonical derivation over a finite grid")
    p.add_argument("file")
    p.add_argument("--domain", type=int, required=True, help="grid denominator d for {0, 1/d, ..., 1}")
    p.add_argument("--max-tuples", type=int, default=None, help="size guard for explicit tuple sets")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("gen", parents=[common], help="write benchmark theories")
    gen = p.add_subparsers(dest="family", required=True)
    g = gen.add_parser("ksat", parents=[common])
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--drop", type=int, default=None)
    g.add_argument("--constrain", action="store_true")
    g = gen.add_parser("stress", parents=[common])
    g.add_argument("--count", type=int, default=1000)
    g = gen.add_parser("hajek", parents=[common])
    g.add_argument("--out", default="fixtures/hajek")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", parents=[common], help="run a benchmark suite")
    p.add_argument("name", choices=sorted(SUITES))
    p.add_argument("--min-k", type=int, default=3)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--budget", type=float, default=None, help="fail if the suite takes longer (seconds)")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (TheoryError, ParseError, EngineError, SolverLimitError, OSError, ValueError) as e:
        if getattr(args, "json", False):
            print(json.dumps({"verdict": "ERROR", "error": str(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 2
    except SolverError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    if isinstance(out, str):
        sys.stdout.write(out)
        return 0
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        _print_human(out)
    return 0 if out["verdict"] in AFFIRMATIVE else 1


if __name__ == "__main__":
    sys.exit(main())
