"""Syntax tree of the mini-language.

Spans never take part in equality, so two trees compare equal when they are
structurally the same program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True, order=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"

    def to_list(self) -> list[int]:
        return [self.line, self.col, self.end_line, self.end_col]

    @classmethod
    def from_list(cls, values) -> Span:
        return cls(*values)

    def contains(self, other: Span) -> bool:
        return (self.line, self.col) <= (other.line, other.col) and (
            other.end_line,
            other.end_col,
        ) <= (self.end_line, self.end_col)

    def overlaps(self, other: Span) -> bool:
        return not (
            (self.end_line, self.end_col) <= (other.line, other.col)
            or (other.end_line, other.end_col) <= (self.line, self.col)
        )


NO_SPAN = Span(0, 0, 0, 0)


def _span() -> Span:
    return field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Span = _span()


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class UnaryOp:
    op: str  # "-" or "!"
    operand: Expr
    span: Span = _span()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Change:
    old: Expr
    new: Expr
    span: Span = _span()


Expr = Union[IntLit, BoolLit, Var, UnaryOp, BinOp, Change]

ARITHMETIC = ("+", "-", "*", "/", "%")
RELATIONAL = ("<", "<=", ">", ">=", "==", "!=")
LOGICAL = ("&&", "||")


@dataclass(frozen=True)
class Decl:
    name: str
    init: Expr | None
    span: Span = _span()


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Block:
    stmts: tuple[Stmt, ...]
    span: Span = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Block
    orelse: Block | None
    span: Span = _span()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: Block
    span: Span = _span()


@dataclass(frozen=True)
class Assert:
    cond: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Return:
    value: Expr
    span: Span = _span()


Stmt = Union[Decl, Assign, Block, If, While, Assert, Return]


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    params: tuple[str, ...]
    body: Block
    span: Span = _span()


@dataclass(frozen=True)
class SourceProgram:
    functions: tuple[FunctionDecl, ...]
    entry: str

    @property
    def function(self) -> FunctionDecl:
        for f in self.functions:
            if f.name == self.entry:
                return f
        raise KeyError(self.entry)


def iter_exprs(e: Expr):
    """Pre-order traversal of an expression."""
    yield e
    if isinstance(e, UnaryOp):
        yield from iter_exprs(e.operand)
    elif isinstance(e, BinOp):
        yield from iter_exprs(e.left)
        yield from iter_exprs(e.right)
    elif isinstance(e, Change):
        yield from iter_exprs(e.old)
        yield from iter_exprs(e.new)


def iter_stmts(stmt: Stmt):
    """Pre-order traversal of statements (blocks included)."""
    yield stmt
    if isinstance(stmt, Block):
        for s in stmt.stmts:
            yield from iter_stmts(s)
    elif isinstance(stmt, If):
        yield from iter_stmts(stmt.then)
        if stmt.orelse is not None:
            yield from iter_stmts(stmt.orelse)
    elif isinstance(stmt, While):
        yield from iter_stmts(stmt.body)


def stmt_exprs(stmt: Stmt) -> tuple[Expr, ...]:
    """Expressions directly owned by ``stmt`` (not by nested statements)."""
    if isinstance(stmt, Decl):
        return () if stmt.init is None else (stmt.init,)
    if isinstance(stmt, Assign):
        return (stmt.value,)
    if isinstance(stmt, (If, While, Assert)):
        return (stmt.cond,)
    if isinstance(stmt, Return):
        return (stmt.value,)
    return ()


def count_changes(program: SourceProgram) -> int:
    total = 0
    for stmt in iter_stmts(program.function.body):
        for e in stmt_exprs(stmt):
            total += sum(1 for sub in iter_exprs(e) if isinstance(sub, Change))
    return total
