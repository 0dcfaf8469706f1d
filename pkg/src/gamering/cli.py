"""Command line entry point: ``gamering <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from .arena import BUDGET_ENV_VAR, DEFAULT_BUDGET, Arena, BudgetExceeded, GameDbError
from .classes import run_deep
from .lab import (Lab, RingConfig, SuiteReport, check_ring_axioms, classify,
                  ideal_experiments, lemma_suite, open_problem_probe, paper_example_suite)
from .notation import ParseError, eval_text, format_game
from .relations import Relations, timed_query

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SUITES = ("paper-examples", "ring-axioms", "ideals", "lemmas", "probe")
RELATIONS = {"iso": "iso", "iter": "iter_eq", "conway": "conway_eq"}


class UsageError(Exception):
    pass


def env_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{BUDGET_ENV_VAR} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gamering",
                                description="Exact computations on finite partizan game forms.")
    p.add_argument("--budget", type=int, default=None,
                   help=f"node budget (default: ${BUDGET_ENV_VAR} or {DEFAULT_BUDGET})")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--db", type=Path, default=None, help="start from a saved GAMEDB file")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate an expression")
    e.add_argument("expr")

    c = sub.add_parser("check", help="decide a relation between two games")
    c.add_argument("relation", choices=tuple(RELATIONS))
    c.add_argument("lhs")
    c.add_argument("rhs")

    r = sub.add_parser("refute-grotsen", help="search for a multiplier separating two games")
    r.add_argument("lhs")
    r.add_argument("rhs")
    r.add_argument("--pool-birthday", type=int, default=2)

    n = sub.add_parser("enumerate", help="enumerate forms up to a birthday")
    n.add_argument("--birthday", type=int, required=True)
    n.add_argument("--classify-by", choices=tuple(RELATIONS), default=None)

    s = sub.add_parser("suite", help="run a verification suite")
    s.add_argument("name", choices=SUITES)
    s.add_argument("--sample", type=int, default=None, help="sampled triples (ring-axioms)")
    s.add_argument("--step-limit", type=int, default=None, help="engine steps per sampled check")
    s.add_argument("--max-birthday", type=int, default=2)
    s.add_argument("--pool-birthday", type=int, default=2, help="multiplier pool (probe)")

    d = sub.add_parser("db", help="save or load a game database")
    d.add_argument("action", choices=("save", "load"))
    d.add_argument("path", type=Path)
    d.add_argument("--birthday", type=int, default=2, help="forms to enumerate before saving")
    return p


def load_lab(path: Path | None, budget: int) -> Lab:
    if path is None:
        return Lab(Arena(budget=budget))
    arena, rest = Arena.load(path, budget=budget)
    rel = Relations(arena)
    try:
        rel.load_memo(rest)
    except ValueError as exc:
        raise GameDbError(f"{path}: {exc}") from None
    return Lab(arena, rel)


def save_lab(lab: Lab, path: Path) -> None:
    lab.arena.save(path, lab.rel.memo_lines())


def execute(argv: Sequence[str] | None = None, out=None) -> int:
    """Run one command; returns the process exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        budget = args.budget if args.budget is not None else env_budget()
        if budget < 1:
            raise UsageError("--budget must be positive")
        return run_deep(_dispatch, args, budget, out)
    except (UsageError, ParseError, GameDbError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"gamering: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"gamering: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def _dispatch(args: argparse.Namespace, budget: int, out) -> int:
    lab = load_lab(args.db, budget)
    fmt = args.format
    cmd = args.command
    if cmd == "eval":
        g = eval_text(lab.arena, args.expr)
        report = {"expr": args.expr, "form": format_game(lab.arena, g),
                  "outcome": lab.rel.outcome(g).value, **lab.tax.flags(g)}
        _emit(out, fmt, report)
        return EXIT_OK
    if cmd == "check":
        g, h = eval_text(lab.arena, args.lhs), eval_text(lab.arena, args.rhs)
        fn = lab.rel.relation(RELATIONS[args.relation])
        verdict, stats = timed_query(lab.rel, lambda: fn(g, h))
        _emit(out, fmt, {"relation": args.relation, "lhs": args.lhs, "rhs": args.rhs,
                         "verdict": bool(verdict), "stats": stats.to_json()})
        return EXIT_OK
    if cmd == "refute-grotsen":
        g, h = eval_text(lab.arena, args.lhs), eval_text(lab.arena, args.rhs)
        pool = lab.universe(args.pool_birthday)
        w, stats = timed_query(lab.rel, lambda: lab.rel.gro_tsen_refute(g, h, pool))
        report: dict[str, Any] = {"relation": "gro-tsen", "lhs": args.lhs, "rhs": args.rhs,
                                  "verdict": "separated" if w else "unresolved"}
        if w is not None:
            wj = w.to_json()
            wj["forms"] = [format_game(lab.arena, k) for k in w.games]
            report["witness"] = wj
        report["stats"] = stats.to_json()
        _emit(out, fmt, report)
        return EXIT_OK
    if cmd == "enumerate":
        t0 = time.perf_counter()
        forms = lab.arena.enumerate_forms(args.birthday, allow_large=args.birthday == 3)
        report = {"birthday": args.birthday, "count": len(forms)}
        if args.classify_by:
            report["classes"] = classify(lab, forms, RELATIONS[args.classify_by],
                                         f"birthday <= {args.birthday}").to_json()
        report["elapsedMs"] = round((time.perf_counter() - t0) * 1000, 3)
        _emit(out, fmt, report)
        return EXIT_OK
    if cmd == "suite":
        rep = _run_suite(lab, args)
        _emit(out, fmt, rep.to_json())
        return EXIT_OK if rep.passed else EXIT_FAILURE
    if cmd == "db":
        if args.action == "save":
            lab.universe(args.birthday)
            save_lab(lab, args.path)
            _emit(out, fmt, {"saved": str(args.path), "nodes": len(lab.arena)})
        else:
            lab = load_lab(args.path, budget)
            text = args.path.read_text(encoding="utf-8")
            canonical = "\n".join([*lab.arena.dump_lines(), *lab.rel.memo_lines()]) + "\n"
            _emit(out, fmt, {"loaded": str(args.path), "nodes": len(lab.arena),
                             "canonical": text == canonical})
        return EXIT_OK
    raise UsageError(f"unknown command {cmd!r}")


def _run_suite(lab: Lab, args: argparse.Namespace) -> SuiteReport:
    name = args.name
    if name == "paper-examples":
        return paper_example_suite(lab, seed=args.seed)
    if name == "lemmas":
        return lemma_suite(lab, seed=args.seed)
    if name == "ideals":
        return ideal_experiments(lab, args.max_birthday)
    if name == "ring-axioms":
        cfg = RingConfig(max_birthday=args.max_birthday, seed=args.seed)
        if args.sample is not None:
            cfg.triple_sample = cfg.well_defined_sample = args.sample
        if args.step_limit is not None:
            cfg.step_limit = args.step_limit
        return check_ring_axioms(lab, cfg)
    universe = lab.universe(1) + [lab.arena.constant("M3")]
    return open_problem_probe(lab, universe, lab.universe(args.pool_birthday))


def _emit(out, fmt: str, report: dict) -> None:
    if fmt == "json":
        out.write(json.dumps(report, ensure_ascii=False, indent=2) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        out.write(f"{key}: {value}\n")


def main() -> None:
    sys.exit(execute())
