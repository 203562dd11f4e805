"""ROR/AOR/STD mutants and their automatic merge into change-annotated programs."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

from .frontend.nodes import (
    ARITHMETIC,
    RELATIONAL,
    Assert,
    Assign,
    BinOp,
    Block,
    BoolLit,
    Change,
    Decl,
    Expr,
    If,
    Return,
    SourceProgram,
    Span,
    Stmt,
    UnaryOp,
    While,
    iter_exprs,
    iter_stmts,
    stmt_exprs,
)
from .frontend.parser import parse_program
from .frontend.printer import format_program

OPERATORS = ("ROR", "AOR", "STD")
ROR_ORDER = ("<", "<=", ">", ">=", "==", "!=")
AOR_ORDER = ("+", "-", "*", "/", "%")


class MutationError(ValueError):
    """A mutation spec that does not apply to the program."""


@dataclass(frozen=True)
class MutationSpec:
    operator: str  # ROR | AOR | STD
    span: Span
    original: str  # operator symbol, or the statement kind for STD
    replacement: str | None = None

    def describe(self) -> str:
        where = f"{self.span.line}:{self.span.col}"
        if self.operator == "STD":
            return f"STD delete {self.original} at {where}"
        return f"{self.operator} {self.original} -> {self.replacement} at {where}"

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "span": self.span.to_list(),
            "original": self.original,
            "replacement": self.replacement,
        }

    @classmethod
    def from_dict(cls, d) -> MutationSpec:
        return cls(d["operator"], Span.from_list(d["span"]), d["original"], d.get("replacement"))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _start(node) -> tuple[int, int, int, int]:
    s = node.span
    return s.line, s.col, -s.end_line, -s.end_col


def _mutable_exprs(program: SourceProgram) -> list[BinOp]:
    """Binary operators outside ``change`` annotations, in source order."""
    found = []
    for stmt in iter_stmts(program.function.body):
        for root in stmt_exprs(stmt):
            inside_change = set()
            for e in iter_exprs(root):
                if isinstance(e, Change):
                    inside_change.update(id(x) for x in iter_exprs(e))
                elif isinstance(e, BinOp) and id(e) not in inside_change:
                    found.append(e)
    return sorted(found, key=_start)


def _deletable(program: SourceProgram) -> list[Stmt]:
    stmts = [
        s
        for s in iter_stmts(program.function.body)
        if isinstance(s, (Assign, Assert)) and not any(isinstance(e, Change) for x in stmt_exprs(s) for e in iter_exprs(x))
    ]
    return sorted(stmts, key=_start)


def _kind(stmt: Stmt) -> str:
    return "assignment" if isinstance(stmt, Assign) else "assert"


def generate_mutants(
    program: SourceProgram, operators: Iterable[str] = OPERATORS, limit: int | None = None
) -> list[MutationSpec]:
    """All single mutations, grouped by operator class, in source order."""
    wanted = set(operators)
    unknown = wanted - set(OPERATORS)
    if unknown:
        raise ValueError(f"unknown mutation operators: {', '.join(sorted(unknown))}")
    specs: list[MutationSpec] = []
    exprs = _mutable_exprs(program)
    if "ROR" in wanted:
        for e in exprs:
            if e.op in RELATIONAL:
                specs += [MutationSpec("ROR", e.span, e.op, r) for r in ROR_ORDER if r != e.op]
    if "AOR" in wanted:
        for e in exprs:
            if e.op in ARITHMETIC:
                specs += [MutationSpec("AOR", e.span, e.op, r) for r in AOR_ORDER if r != e.op]
    if "STD" in wanted:
        specs += [MutationSpec("STD", s.span, _kind(s)) for s in _deletable(program)]
    return specs if limit is None else specs[:limit]


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

ExprRewrite = Callable[[Expr], Expr | None]
StmtRewrite = Callable[[Stmt], Stmt | None]


def _map_expr(e: Expr, rewrite: ExprRewrite) -> Expr:
    out = rewrite(e)
    if out is not None:
        return out
    if isinstance(e, UnaryOp):
        return replace(e, operand=_map_expr(e.operand, rewrite))
    if isinstance(e, BinOp):
        return replace(e, left=_map_expr(e.left, rewrite), right=_map_expr(e.right, rewrite))
    if isinstance(e, Change):
        return replace(e, old=_map_expr(e.old, rewrite), new=_map_expr(e.new, rewrite))
    return e


def _map_block(block: Block, expr: ExprRewrite, stmt: StmtRewrite) -> Block:
    out = []
    for s in block.stmts:
        mapped = _map_stmt(s, expr, stmt)
        if mapped is not None:
            out.append(mapped)
    return replace(block, stmts=tuple(out))


def _map_stmt(s: Stmt, expr: ExprRewrite, stmt: StmtRewrite):
    """Rewrite a statement; ``stmt`` may return ``False`` to delete it."""
    out = stmt(s)
    if out is False:
        return None
    if out is not None:
        return out
    if isinstance(s, Block):
        return _map_block(s, expr, stmt)
    if isinstance(s, Decl):
        return s if s.init is None else replace(s, init=_map_expr(s.init, expr))
    if isinstance(s, Assign):
        return replace(s, value=_map_expr(s.value, expr))
    if isinstance(s, Assert):
        return replace(s, cond=_map_expr(s.cond, expr))
    if isinstance(s, Return):
        return replace(s, value=_map_expr(s.value, expr))
    if isinstance(s, If):
        orelse = None if s.orelse is None else _map_block(s.orelse, expr, stmt)
        return replace(s, cond=_map_expr(s.cond, expr), then=_map_block(s.then, expr, stmt), orelse=orelse)
    if isinstance(s, While):
        return replace(s, cond=_map_expr(s.cond, expr), body=_map_block(s.body, expr, stmt))
    raise TypeError(s)


def _rebuild(program: SourceProgram, expr: ExprRewrite, stmt: StmtRewrite) -> SourceProgram:
    functions = []
    for f in program.functions:
        if f.name == program.entry:
            f = replace(f, body=_map_block(f.body, expr, stmt))
        functions.append(f)
    return SourceProgram(tuple(functions), program.entry)


def _reparse(program: SourceProgram) -> SourceProgram:
    return parse_program(format_program(program), program.entry)


def _check_applicable(program: SourceProgram, specs: Sequence[MutationSpec]) -> None:
    exprs = {e.span: e for e in _mutable_exprs(program)}
    stmts = {s.span: s for s in _deletable(program)}
    for spec in specs:
        if spec.operator in ("ROR", "AOR"):
            e = exprs.get(spec.span)
            family = RELATIONAL if spec.operator == "ROR" else ARITHMETIC
            if e is None or e.op != spec.original or e.op not in family:
                raise MutationError(f"{spec.describe()}: no matching operator at that span")
            if spec.replacement not in family or spec.replacement == spec.original:
                raise MutationError(f"{spec.describe()}: invalid replacement")
        elif spec.operator == "STD":
            s = stmts.get(spec.span)
            if s is None or _kind(s) != spec.original:
                raise MutationError(f"{spec.describe()}: no deletable statement at that span")
        else:
            raise MutationError(f"unknown operator {spec.operator!r}")
    for i, a in enumerate(specs):
        for b in specs[i + 1 :]:
            if a.span.overlaps(b.span):
                raise MutationError(f"overlapping mutations: {a.describe()} and {b.describe()}")


def _as_list(specs) -> list[MutationSpec]:
    return [specs] if isinstance(specs, MutationSpec) else list(specs)


def _rewriters(specs: list[MutationSpec], annotate: bool):
    by_span = {s.span: s for s in specs}

    def expr(e: Expr):
        spec = by_span.get(e.span)
        if spec is None or spec.operator == "STD" or not isinstance(e, BinOp) or e.op != spec.original:
            return None
        mutated = replace(e, op=spec.replacement)
        return Change(e, mutated, e.span) if annotate else mutated

    def stmt(s: Stmt):
        spec = by_span.get(s.span)
        if spec is None or spec.operator != "STD" or not isinstance(s, (Assign, Assert)):
            return None
        if not annotate:
            return False
        flag = Change(BoolLit(True), BoolLit(False))
        return If(flag, Block((s,)), None, s.span)

    return expr, stmt


def unify_versions(program: SourceProgram, specs) -> SourceProgram:
    """Merge base and mutant into one program with ``change`` annotations."""
    specs = _as_list(specs)
    _check_applicable(program, specs)
    return _reparse(_rebuild(program, *_rewriters(specs, annotate=True)))


def apply_mutation(program: SourceProgram, specs) -> SourceProgram:
    """The mutant itself, without annotations."""
    specs = _as_list(specs)
    _check_applicable(program, specs)
    return _reparse(_rebuild(program, *_rewriters(specs, annotate=False)))


def project(program: SourceProgram, version: str) -> SourceProgram:
    """Resolve every ``change`` to its old or new operand."""
    if version not in ("old", "new"):
        raise ValueError(f"version must be 'old' or 'new', not {version!r}")

    def expr(e: Expr):
        if isinstance(e, Change):
            return _map_expr(e.old if version == "old" else e.new, expr)
        return None

    return _reparse(_rebuild(program, expr, lambda s: None))
