from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # syntax | type | name | change-arity | nested-change | entry
    message: str
    line: int
    col: int

    def format(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.message}"


class FrontendError(Exception):
    def __init__(self, diagnostics: list[Diagnostic], filename: str = "<input>"):
        self.diagnostics = list(diagnostics)
        self.filename = filename
        super().__init__(self.format())

    @property
    def kinds(self) -> set[str]:
        return {d.kind for d in self.diagnostics}

    def format(self) -> str:
        return "\n".join(d.format(self.filename) for d in self.diagnostics)


class CompilerError(RuntimeError):
    """Internal compiler inconsistency (for example an unbalanced stack)."""
