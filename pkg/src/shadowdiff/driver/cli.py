"""Command line interface: ``run``, ``compare`` and ``mutate``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .. import __version__
from ..engine import EngineConfig, run_plain, run_shadow
from ..frontend import FrontendError, compile_to_ir, format_program, parse_file
from ..mutator import OPERATORS, generate_mutants, unify_versions
from .compare import compare, format_table, rows_to_json
from .dot import emit_dot

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIFFS = 10


class UsageError(Exception):
    pass


def load_tests(path: str) -> list[dict]:
    """Read ``{"tests": [{"args": [...], "name": ...}, ...]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    tests = data.get("tests") if isinstance(data, dict) else None
    if not isinstance(tests, list):
        raise UsageError(f"{path}: expected an object with a \"tests\" list")
    out = []
    for i, t in enumerate(tests):
        args = t.get("args") if isinstance(t, dict) else None
        if not isinstance(args, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in args):
            raise UsageError(f"{path}: test {i} needs an integer \"args\" list")
        name = t.get("name")
        if name is not None and not isinstance(name, str):
            raise UsageError(f"{path}: test {i} has a non-string name")
        out.append({"args": args, "name": name or f"test {i}"})
    return out


def _parse_operators(text: str) -> list[str]:
    ops = [o.strip().upper() for o in text.split(",") if o.strip()]
    bad = [o for o in ops if o not in OPERATORS]
    if bad:
        raise UsageError(f"unknown mutation operators: {', '.join(bad)}")
    return ops


def _config(args) -> EngineConfig:
    depth = None if args.bse_depth is not None and args.bse_depth < 0 else args.bse_depth
    return EngineConfig(
        bse_depth=depth,
        loop_bound=args.loop_bound,
        step_budget=args.step_budget,
        emit_smt=args.emit_smt,
        solver=args.solver,
    )


def _load_program(path: str, entry: str | None):
    if not os.path.exists(path):
        raise UsageError(f"{path}: no such file")
    return parse_file(path, entry)


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_run(args) -> int:
    program = _load_program(args.program, args.entry)
    ir = compile_to_ir(program)
    cfg = _config(args)
    subject = Path(args.program).stem
    if args.mode == "shadow":
        if not args.tests:
            raise UsageError("--tests is required in shadow mode")
        report = run_shadow(ir, load_tests(args.tests), cfg, subject)
        found = report.counters.diff_paths
        print(f"{subject}: {len(report.divergence_points)} divergence points, {found} diff paths")
        for p in report.diff_paths:
            args_text = ", ".join(f"{k}={v}" for k, v in p.input.items())
            print(f"  [{p.provenance}] {args_text} -> {p.terminal['kind']} ({p.verdict})")
    else:
        version = args.mode.split("-", 1)[1]
        report = run_plain(ir, version, cfg, subject)
        found = report.diff_count
        print(f"{subject}: {report.counters.paths} paths ({found} diverging)")
        for p in report.paths:
            args_text = "-" if p.input is None else ", ".join(f"{k}={v}" for k, v in p.input.items())
            print(f"  {args_text} -> {p.terminal['kind']} ({p.verdict})")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _write(args.out, report.to_json())
    _write(args.dot, emit_dot(report))
    return EXIT_DIFFS if found else EXIT_OK


def cmd_compare(args) -> int:
    program = _load_program(args.program, args.entry)
    tests = load_tests(args.tests)
    rows = compare(
        Path(args.program).stem,
        program,
        _parse_operators(args.operators),
        tests,
        _config(args),
        args.limit,
        jobs=args.jobs,
    )
    sys.stdout.write(format_table(rows))
    _write(args.out, rows_to_json(rows))
    return EXIT_DIFFS if any(r.shadow_diffs for r in rows) else EXIT_OK


def cmd_mutate(args) -> int:
    program = _load_program(args.program, args.entry)
    specs = generate_mutants(program, _parse_operators(args.operators), args.limit)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.program).stem
    manifest = []
    for i, spec in enumerate(specs):
        name = f"{stem}_{spec.operator.lower()}_{i:03d}.sl"
        (out / name).write_text(format_program(unify_versions(program, spec)), encoding="utf-8")
        manifest.append({**spec.to_dict(), "file": name, "description": spec.describe()})
    (out / "manifest.json").write_text(json.dumps({"mutants": manifest}, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(specs)} mutants to {out}")
    return EXIT_OK


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bse-depth", type=int, default=20, help="branch decisions per BSE path (-1: unbounded)")
    p.add_argument("--loop-bound", type=int, default=32, help="iterations per backward edge")
    p.add_argument("--step-budget", type=int, default=1_000_000, help="instructions per path")
    p.add_argument("--emit-smt", metavar="DIR", help="write each solver query as SMT-LIB")
    p.add_argument("--solver", choices=["builtin"], default="builtin")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shadowdiff", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="shadow or plain symbolic execution of one program")
    run.add_argument("--program", required=True)
    run.add_argument("--entry", help="function to analyze when the file declares several")
    run.add_argument("--tests", help="tests JSON (required in shadow mode)")
    run.add_argument("--mode", choices=["shadow", "plain-old", "plain-new"], default="shadow")
    run.add_argument("--out", help="report JSON path")
    run.add_argument("--dot", help="execution tree DOT path")
    _engine_flags(run)
    run.set_defaults(func=cmd_run)

    cmp = sub.add_parser("compare", help="plain vs shadow counts over generated mutants")
    cmp.add_argument("--program", required=True)
    cmp.add_argument("--entry")
    cmp.add_argument("--tests", required=True)
    cmp.add_argument("--operators", default="ROR,AOR,STD", help="comma-separated subset of ROR,AOR,STD")
    cmp.add_argument("--limit", type=int)
    cmp.add_argument("--jobs", type=int, default=1)
    cmp.add_argument("--out", help="table JSON path")
    _engine_flags(cmp)
    cmp.set_defaults(func=cmd_compare)

    mut = sub.add_parser("mutate", help="write change-annotated mutants and a manifest")
    mut.add_argument("--program", required=True)
    mut.add_argument("--entry")
    mut.add_argument("--operators", default="ROR,AOR,STD")
    mut.add_argument("--limit", type=int)
    mut.add_argument("--out-dir", required=True)
    mut.set_defaults(func=cmd_mutate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except FrontendError as exc:
        print(exc.format(), file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())
