"""Command line orchestration, reports and the comparison table."""

from ..report import PlainReport, ShadowReport, load_report
from .cli import cmd_compare, cmd_mutate, cmd_run, load_tests, main
from .compare import ComparisonRow, compare, format_table
from .dot import emit_dot

__all__ = [
    "ComparisonRow",
    "PlainReport",
    "ShadowReport",
    "cmd_compare",
    "cmd_mutate",
    "cmd_run",
    "compare",
    "emit_dot",
    "format_table",
    "load_report",
    "load_tests",
    "main",
]
