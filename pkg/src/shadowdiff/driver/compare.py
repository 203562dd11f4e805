"""Plain versus shadow symbolic execution over a set of mutants."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from ..engine import EngineConfig, run_plain, run_shadow
from ..frontend import FrontendError, SourceProgram, compile_to_ir, count_changes, format_program
from ..mutator import MutationSpec, generate_mutants, unify_versions


@dataclass
class ComparisonRow:
    subject: str
    mutant: str
    type: str  # ROR | AOR | STD | MUL | given
    description: str
    plain_paths: int
    plain_diffs: int
    shadow_diffs: int
    error: str | None = None

    def __post_init__(self):
        if min(self.plain_paths, self.plain_diffs, self.shadow_diffs) < 0:
            raise ValueError("counts must be nonnegative")
        if self.plain_diffs > self.plain_paths:
            raise ValueError("plain diff count exceeds plain path count")


def compare_unified(
    subject: str, mutant: str, kind: str, description: str, program: SourceProgram, tests, cfg: EngineConfig
) -> ComparisonRow:
    try:
        ir = compile_to_ir(program)
        plain = run_plain(ir, "new", cfg, subject)
        shadow = run_shadow(ir, tests, cfg, subject)
    except Exception as exc:  # recorded per row; the table keeps going
        return ComparisonRow(subject, mutant, kind, description, 0, 0, 0, f"{type(exc).__name__}: {exc}")
    return ComparisonRow(
        subject, mutant, kind, description, plain.counters.paths, plain.diff_count, shadow.counters.diff_paths
    )


def _job(args) -> ComparisonRow:
    subject, mutant, kind, description, source, entry, tests, cfg = args
    from ..frontend import parse_program

    return compare_unified(subject, mutant, kind, description, parse_program(source, entry), tests, cfg)


def compare(
    subject: str,
    base: SourceProgram,
    operators,
    tests,
    cfg: EngineConfig | None = None,
    limit: int | None = None,
    combined: list[list[MutationSpec]] | None = None,
    jobs: int = 1,
) -> list[ComparisonRow]:
    """One row per mutant, in generation order.

    A base program that already carries ``change`` annotations is treated as
    a single given mutant.
    """
    cfg = cfg or EngineConfig()
    work = []
    if count_changes(base):
        work.append((f"{subject}", "given", "annotated program", base))
    else:
        groups = [[s] for s in generate_mutants(base, operators, limit)]
        groups += combined or []
        for i, specs in enumerate(groups):
            kind = specs[0].operator if len(specs) == 1 else "MUL"
            description = "; ".join(s.describe() for s in specs)
            name = f"{subject}_{i}"
            try:
                program = unify_versions(base, specs)
            except (ValueError, FrontendError) as exc:
                work.append((name, kind, description, exc))
                continue
            work.append((name, kind, description, program))
    rows: list[ComparisonRow | None] = [None] * len(work)
    pending = []
    for i, (name, kind, description, program) in enumerate(work):
        if isinstance(program, Exception):
            rows[i] = ComparisonRow(subject, name, kind, description, 0, 0, 0, str(program))
        elif jobs > 1:
            pending.append((i, (subject, name, kind, description, format_program(program), program.entry, tests, cfg)))
        else:
            rows[i] = compare_unified(subject, name, kind, description, program, tests, cfg)
    if pending:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for (i, _), row in zip(pending, pool.map(_job, [args for _, args in pending])):
                rows[i] = row
    return rows


def rows_to_json(rows: list[ComparisonRow]) -> str:
    return json.dumps({"rows": [asdict(r) for r in rows]}, indent=2, sort_keys=True) + "\n"


def rows_from_json(text: str) -> list[ComparisonRow]:
    return [ComparisonRow(**r) for r in json.loads(text)["rows"]]


def format_table(rows: list[ComparisonRow]) -> str:
    header = ("mutant", "type", "plain paths (diff)", "shadow diff", "note")
    body = [
        (
            r.mutant,
            r.type,
            f"{r.plain_paths} ({r.plain_diffs})",
            str(r.shadow_diffs),
            r.error or r.description,
        )
        for r in rows
    ]
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)] if body else [len(h) for h in header]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in body:
        out.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"
