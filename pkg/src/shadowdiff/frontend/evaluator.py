"""Direct concrete interpreter over the syntax tree.

Used as an independent oracle for the compiler and the IR interpreter. Each
``change`` resolves to the operand of the selected version.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import div32, rem32, wrap
from .nodes import (
    Assert,
    Assign,
    BinOp,
    Block,
    BoolLit,
    Change,
    Decl,
    Expr,
    If,
    IntLit,
    Return,
    SourceProgram,
    Span,
    Stmt,
    UnaryOp,
    Var,
    While,
)

DEFAULT_LOOP_BOUND = 32


@dataclass(frozen=True)
class AstOutcome:
    kind: str  # returned | assertion-failure | div-by-zero | loop-bound-hit
    value: int | None = None
    span: Span | None = None  # failing statement or expression
    trace: tuple[tuple[Span, bool], ...] = field(default=(), compare=True)


class _Stop(Exception):
    def __init__(self, outcome: AstOutcome):
        self.outcome = outcome


class _Return(Exception):
    def __init__(self, value: int):
        self.value = value


class AstEvaluator:
    def __init__(self, program: SourceProgram, version: str = "new", loop_bound: int = DEFAULT_LOOP_BOUND):
        if version not in ("old", "new"):
            raise ValueError(f"version must be 'old' or 'new', not {version!r}")
        self.function = program.function
        self.version = version
        self.loop_bound = loop_bound

    def run(self, args) -> AstOutcome:
        args = list(args)
        if len(args) != len(self.function.params):
            raise ValueError(f"{self.function.name} expects {len(self.function.params)} arguments, got {len(args)}")
        self.env = {p: wrap(a) for p, a in zip(self.function.params, args)}
        self.trace: list[tuple[Span, bool]] = []
        self.iterations: dict[int, int] = {}
        try:
            self.stmt(self.function.body)
        except _Return as ret:
            return AstOutcome("returned", ret.value, None, tuple(self.trace))
        except _Stop as stop:
            return AstOutcome(stop.outcome.kind, None, stop.outcome.span, tuple(self.trace))
        return AstOutcome("returned", None, None, tuple(self.trace))

    def stmt(self, s: Stmt):
        if isinstance(s, Block):
            for inner in s.stmts:
                self.stmt(inner)
        elif isinstance(s, Decl):
            self.env[s.name] = 0 if s.init is None else self.value(s.init)
        elif isinstance(s, Assign):
            self.env[s.name] = self.value(s.value)
        elif isinstance(s, If):
            if self.cond(s.cond):
                self.stmt(s.then)
            elif s.orelse is not None:
                self.stmt(s.orelse)
        elif isinstance(s, While):
            key = id(s)
            while self.cond(s.cond):
                self.stmt(s.body)
                self.iterations[key] = self.iterations.get(key, 0) + 1
                if self.iterations[key] > self.loop_bound:
                    raise _Stop(AstOutcome("loop-bound-hit", span=s.span))
        elif isinstance(s, Assert):
            if not self.cond(s.cond):
                raise _Stop(AstOutcome("assertion-failure", span=s.span))
        elif isinstance(s, Return):
            raise _Return(self.value(s.value))
        else:
            raise TypeError(s)

    def cond(self, e: Expr) -> bool:
        """Evaluate a condition with short-circuiting, tracing each atom."""
        if isinstance(e, UnaryOp) and e.op == "!":
            return not self.cond(e.operand)
        if isinstance(e, BinOp) and e.op == "&&":
            return self.cond(e.left) and self.cond(e.right)
        if isinstance(e, BinOp) and e.op == "||":
            return self.cond(e.left) or self.cond(e.right)
        result = self.truth(e)
        self.trace.append((e.span, result))
        return result

    def truth(self, e: Expr) -> bool:
        if isinstance(e, BoolLit):
            return e.value
        if isinstance(e, UnaryOp) and e.op == "!":
            return not self.truth(e.operand)
        if isinstance(e, Change):
            return self.truth(e.old if self.version == "old" else e.new)
        if isinstance(e, BinOp):
            a, b = self.value(e.left), self.value(e.right)
            return {
                "<": a < b, "<=": a <= b, ">": a > b,
                ">=": a >= b, "==": a == b, "!=": a != b,
            }[e.op]
        raise TypeError(e)

    def value(self, e: Expr) -> int:
        if isinstance(e, IntLit):
            return e.value
        if isinstance(e, Var):
            return self.env[e.name]
        if isinstance(e, UnaryOp):
            return wrap(-self.value(e.operand))
        if isinstance(e, Change):
            return self.value(e.old if self.version == "old" else e.new)
        a, b = self.value(e.left), self.value(e.right)
        if e.op == "+":
            return wrap(a + b)
        if e.op == "-":
            return wrap(a - b)
        if e.op == "*":
            return wrap(a * b)
        if b == 0:
            raise _Stop(AstOutcome("div-by-zero", span=e.span))
        return div32(a, b) if e.op == "/" else rem32(a, b)


def evaluate(program: SourceProgram, args, version: str = "new", loop_bound: int = DEFAULT_LOOP_BOUND) -> AstOutcome:
    return AstEvaluator(program, version, loop_bound).run(args)
