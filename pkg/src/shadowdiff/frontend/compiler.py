"""Compile checked syntax trees to the stack IR.

Conditions compile to jumping code: every comparison, boolean literal or
boolean ``change`` reached in a condition is one branch site, and ``&&``,
``||`` and ``!`` only rearrange jump targets. Boolean ``change`` operands are
evaluated to 0/1 values with ``CMP`` so they stay symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Rel
from .diagnostics import CompilerError
from .ir import BRANCHES, STACK_EFFECT, Instr, IrProgram, Op, Site
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
    count_changes,
)
from .printer import format_expr

_ARITH = {"+": Op.IADD, "-": Op.ISUB, "*": Op.IMUL, "/": Op.IDIV, "%": Op.IREM}


class Label:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


@dataclass
class _Pending:
    op: Op
    arg: int | Label | None = None
    rel: Rel | None = None
    site: tuple[str, Span, str] | None = None
    scope: str = "both"


class _Compiler:
    def __init__(self, program: SourceProgram):
        self.function = program.function
        self.slots: dict[str, int] = {}
        for p in self.function.params:
            self.slots[p] = len(self.slots)
        self.items: list[_Pending | Label] = []
        self.scope = "both"
        self.labels = 0

    def label(self, hint: str) -> Label:
        self.labels += 1
        return Label(f"{hint}{self.labels}")

    def emit(self, op: Op, arg=None, rel=None, site=None):
        scope = self.scope if op in (Op.IDIV, Op.IREM) else "both"
        self.items.append(_Pending(op, arg, rel, site, scope))

    def place(self, label: Label):
        self.items.append(label)

    def slot(self, name: str) -> int:
        if name not in self.slots:
            self.slots[name] = len(self.slots)
        return self.slots[name]

    # -- statements -------------------------------------------------------

    def stmt(self, s: Stmt):
        if isinstance(s, Block):
            for inner in s.stmts:
                self.stmt(inner)
        elif isinstance(s, Decl):
            if s.init is None:
                self.emit(Op.IPUSH, 0)
            else:
                self.value(s.init)
            self.emit(Op.ISTORE, self.slot(s.name))
        elif isinstance(s, Assign):
            self.value(s.value)
            self.emit(Op.ISTORE, self.slot(s.name))
        elif isinstance(s, If):
            then_l, else_l, end_l = self.label("then"), self.label("else"), self.label("endif")
            self.branch(s.cond, then_l, else_l)
            self.place(then_l)
            self.stmt(s.then)
            if s.orelse is not None:
                self.emit(Op.GOTO, end_l)
                self.place(else_l)
                self.stmt(s.orelse)
            else:
                self.place(else_l)
            self.place(end_l)
        elif isinstance(s, While):
            top, body, end = self.label("loop"), self.label("body"), self.label("endloop")
            self.place(top)
            self.branch(s.cond, body, end)
            self.place(body)
            self.stmt(s.body)
            self.emit(Op.GOTO, top)
            self.place(end)
        elif isinstance(s, Assert):
            ok, fail = self.label("ok"), self.label("fail")
            self.branch(s.cond, ok, fail)
            self.place(fail)
            self.emit(Op.ASSERT, site=("assert", s.span, f"assert({format_expr(s.cond)})"))
            self.place(ok)
        elif isinstance(s, Return):
            self.value(s.value)
            self.emit(Op.RETURN)
        else:
            raise CompilerError(f"unknown statement {s!r}")

    # -- conditions -------------------------------------------------------

    def branch(self, e: Expr, if_true: Label, if_false: Label):
        """Jump to ``if_true`` when ``e`` holds, otherwise to ``if_false``."""
        if isinstance(e, UnaryOp) and e.op == "!":
            self.branch(e.operand, if_false, if_true)
        elif isinstance(e, BinOp) and e.op == "&&":
            mid = self.label("and")
            self.branch(e.left, mid, if_false)
            self.place(mid)
            self.branch(e.right, if_true, if_false)
        elif isinstance(e, BinOp) and e.op == "||":
            mid = self.label("or")
            self.branch(e.left, if_true, mid)
            self.place(mid)
            self.branch(e.right, if_true, if_false)
        elif isinstance(e, BinOp):
            self.value(e.left)
            self.value(e.right)
            self.emit(Op.IF_CMP, if_true, Rel(e.op), site=("branch", e.span, format_expr(e)))
            self.emit(Op.GOTO, if_false)
        else:
            self.truth_value(e)
            self.emit(Op.IF_TRUE, if_true, site=("branch", e.span, format_expr(e)))
            self.emit(Op.GOTO, if_false)

    def truth_value(self, e: Expr):
        """Push 0/1 for a boolean literal, comparison, negation or change."""
        if isinstance(e, BoolLit):
            self.emit(Op.IPUSH, int(e.value))
        elif isinstance(e, BinOp):
            self.value(e.left)
            self.value(e.right)
            self.emit(Op.CMP, rel=Rel(e.op))
        elif isinstance(e, UnaryOp) and e.op == "!":
            inner = e.operand
            if isinstance(inner, UnaryOp) and inner.op == "!":
                self.truth_value(inner.operand)
            elif isinstance(inner, BoolLit):
                self.emit(Op.IPUSH, int(not inner.value))
            elif isinstance(inner, BinOp):
                self.value(inner.left)
                self.value(inner.right)
                self.emit(Op.CMP, rel=Rel(inner.op).negate())
            else:
                self.truth_value(inner)
                self.emit(Op.IPUSH, 0)
                self.emit(Op.CMP, rel=Rel.EQ)
        elif isinstance(e, Change):
            self.change(e, self.truth_value)
        else:
            raise CompilerError(f"not a boolean atom: {format_expr(e)}")

    # -- values -----------------------------------------------------------

    def change(self, e: Change, compile_operand):
        self.scope = "old"
        compile_operand(e.old)
        self.scope = "new"
        compile_operand(e.new)
        self.scope = "both"
        self.emit(Op.CHANGE)

    def value(self, e: Expr):
        if isinstance(e, IntLit):
            self.emit(Op.IPUSH, e.value)
        elif isinstance(e, Var):
            self.emit(Op.ILOAD, self.slots[e.name])
        elif isinstance(e, UnaryOp) and e.op == "-":
            self.value(e.operand)
            self.emit(Op.INEG)
        elif isinstance(e, BinOp) and e.op in _ARITH:
            self.value(e.left)
            self.value(e.right)
            op = _ARITH[e.op]
            site = ("div", e.span, format_expr(e)) if op in (Op.IDIV, Op.IREM) else None
            self.emit(op, site=site)
        elif isinstance(e, Change):
            self.change(e, self.value)
        else:
            raise CompilerError(f"not an integer expression: {format_expr(e)}")

    # -- assembly ---------------------------------------------------------

    def assemble(self) -> IrProgram:
        self.emit(Op.HALT)
        items = self._drop_fallthrough_jumps(self.items)
        positions: dict[Label, int] = {}
        count = 0
        for item in items:
            if isinstance(item, Label):
                positions[item] = count
            else:
                count += 1
        code: list[Instr] = []
        sites: list[Site] = []
        for item in items:
            if isinstance(item, Label):
                continue
            arg = positions[item.arg] if isinstance(item.arg, Label) else item.arg
            site_id = None
            if item.site is not None:
                kind, span, text = item.site
                site_id = len(sites)
                sites.append(Site(site_id, kind, len(code), span, text))
            code.append(Instr(item.op, arg, item.rel, site_id, item.scope))
        names = [None] * len(self.slots)
        for name, index in self.slots.items():
            names[index] = name
        program = IrProgram(
            self.function.name,
            self.function.params,
            tuple(names),
            tuple(code),
            tuple(sites),
            any(i.op is Op.CHANGE for i in code),
        )
        check_stack(program)
        return program

    @staticmethod
    def _drop_fallthrough_jumps(items):
        out = []
        for i, item in enumerate(items):
            if isinstance(item, _Pending) and item.op is Op.GOTO:
                j = i + 1
                following = set()
                while j < len(items) and isinstance(items[j], Label):
                    following.add(items[j])
                    j += 1
                if item.arg in following:
                    continue
            out.append(item)
        return out


def check_stack(program: IrProgram) -> None:
    """Abstract stack-depth check; raises :class:`CompilerError`."""
    code = program.code
    n = len(code)
    depth: list[int | None] = [None] * n
    work = [(0, 0)]
    while work:
        index, d = work.pop()
        if not 0 <= index < n:
            raise CompilerError(f"jump target {index} outside code")
        if depth[index] is not None:
            if depth[index] != d:
                raise CompilerError(f"inconsistent stack depth at {index}: {depth[index]} vs {d}")
            continue
        depth[index] = d
        instr = code[index]
        if instr.op is Op.RETURN and d != 1:
            raise CompilerError(f"RETURN at {index} with stack depth {d}")
        after = d + STACK_EFFECT[instr.op]
        need = {Op.IF_CMP: 2, Op.CMP: 2, Op.CHANGE: 2, Op.IF_TRUE: 1, Op.ISTORE: 1, Op.INEG: 1}
        need.update({op: 2 for op in (Op.IADD, Op.ISUB, Op.IMUL, Op.IDIV, Op.IREM)})
        if d < need.get(instr.op, 0) or after < 0:
            raise CompilerError(f"stack underflow at {index}")
        if instr.op in (Op.RETURN, Op.HALT, Op.ASSERT):
            if instr.op is Op.HALT and d != 0:
                raise CompilerError(f"HALT at {index} with stack depth {d}")
            continue
        if instr.op is Op.GOTO:
            work.append((instr.arg, after))
            continue
        if instr.op in BRANCHES:
            if instr.site is None:
                raise CompilerError(f"branch at {index} has no site entry")
            work.append((instr.arg, after))
        if (instr.op in (Op.ISTORE,) or instr.op in BRANCHES) and after != 0:
            raise CompilerError(f"unbalanced statement boundary at {index}")
        work.append((index + 1, after))


def compile_to_ir(program: SourceProgram) -> IrProgram:
    compiler = _Compiler(program)
    compiler.stmt(program.function.body)
    ir = compiler.assemble()
    if ir.has_change != (count_changes(program) > 0):
        raise CompilerError("change annotations lost during compilation")
    return ir
