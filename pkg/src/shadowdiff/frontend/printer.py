"""Render syntax trees back to ``.sl`` source."""

from __future__ import annotations

from .nodes import (
    Assert,
    Assign,
    BinOp,
    Block,
    BoolLit,
    Change,
    Decl,
    Expr,
    FunctionDecl,
    If,
    IntLit,
    Return,
    SourceProgram,
    Stmt,
    UnaryOp,
    Var,
    While,
)

_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY = 7


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PRECEDENCE[e.op]
    if isinstance(e, UnaryOp) or (isinstance(e, IntLit) and e.value < 0):
        return _UNARY
    return 8


def format_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Change):
        return f"change({format_expr(e.old)}, {format_expr(e.new)})"
    if isinstance(e, UnaryOp):
        inner = format_expr(e.operand)
        if _prec(e.operand) < _UNARY or (e.op == "-" and (inner.startswith("-") or isinstance(e.operand, IntLit))):
            inner = f"({inner})"
        return f"{e.op}{inner}"
    p = _PRECEDENCE[e.op]
    left = format_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = format_expr(e.right)
    # Left-associative: an equal-precedence right operand needs parentheses.
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def _stmt_lines(s: Stmt, indent: str) -> list[str]:
    if isinstance(s, Decl):
        if s.init is None:
            return [f"{indent}int {s.name};"]
        return [f"{indent}int {s.name} = {format_expr(s.init)};"]
    if isinstance(s, Assign):
        return [f"{indent}{s.name} = {format_expr(s.value)};"]
    if isinstance(s, Assert):
        return [f"{indent}assert({format_expr(s.cond)});"]
    if isinstance(s, Return):
        return [f"{indent}return {format_expr(s.value)};"]
    if isinstance(s, Block):
        return [f"{indent}{{", *_block_body(s, indent + "  "), f"{indent}}}"]
    if isinstance(s, If):
        lines = [f"{indent}if ({format_expr(s.cond)}) {{", *_block_body(s.then, indent + "  ")]
        if s.orelse is not None:
            lines += [f"{indent}}} else {{", *_block_body(s.orelse, indent + "  ")]
        return lines + [f"{indent}}}"]
    if isinstance(s, While):
        return [
            f"{indent}while ({format_expr(s.cond)}) {{",
            *_block_body(s.body, indent + "  "),
            f"{indent}}}",
        ]
    raise TypeError(s)


def _block_body(block: Block, indent: str) -> list[str]:
    lines = []
    for s in block.stmts:
        lines += _stmt_lines(s, indent)
    return lines


def format_function(f: FunctionDecl) -> str:
    params = ", ".join(f"int {p}" for p in f.params)
    lines = [f"int {f.name}({params}) {{", *_block_body(f.body, "  "), "}"]
    return "\n".join(lines)


def format_program(program: SourceProgram) -> str:
    return "\n\n".join(format_function(f) for f in program.functions) + "\n"
