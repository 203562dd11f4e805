"""Lexing, parsing, checking and compilation of ``.sl`` programs."""

from .compiler import check_stack, compile_to_ir
from .diagnostics import CompilerError, Diagnostic, FrontendError
from .evaluator import AstOutcome, evaluate
from .ir import Instr, IrProgram, Op, Site
from .nodes import SourceProgram, Span, count_changes
from .parser import parse_file, parse_program
from .printer import format_expr, format_program

__all__ = [
    "AstOutcome",
    "CompilerError",
    "Diagnostic",
    "FrontendError",
    "Instr",
    "IrProgram",
    "Op",
    "Site",
    "SourceProgram",
    "Span",
    "check_stack",
    "compile_to_ir",
    "count_changes",
    "evaluate",
    "format_expr",
    "format_program",
    "parse_file",
    "parse_program",
]
