"""Stack-based intermediate representation."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..core import Rel
from .nodes import Span


class Op(enum.Enum):
    IPUSH = "IPUSH"
    ILOAD = "ILOAD"
    ISTORE = "ISTORE"
    IADD = "IADD"
    ISUB = "ISUB"
    IMUL = "IMUL"
    IDIV = "IDIV"
    IREM = "IREM"
    INEG = "INEG"
    CMP = "CMP"  # pops b, a; pushes 1 if (a rel b) else 0
    IF_CMP = "IF_CMP"  # pops b, a; jumps if (a rel b)
    IF_TRUE = "IF_TRUE"  # pops v; jumps if v != 0
    GOTO = "GOTO"
    CHANGE = "CHANGE"  # pops new, old; pushes the paired value
    ASSERT = "ASSERT"  # assertion failure (reached only when the check failed)
    RETURN = "RETURN"
    HALT = "HALT"


ARITH_INSTR = {Op.IADD: "+", Op.ISUB: "-", Op.IMUL: "*", Op.IDIV: "/", Op.IREM: "%"}
BRANCHES = (Op.IF_CMP, Op.IF_TRUE)

STACK_EFFECT = {
    Op.IPUSH: 1, Op.ILOAD: 1, Op.ISTORE: -1,
    Op.IADD: -1, Op.ISUB: -1, Op.IMUL: -1, Op.IDIV: -1, Op.IREM: -1,
    Op.INEG: 0, Op.CMP: -1, Op.IF_CMP: -2, Op.IF_TRUE: -1, Op.GOTO: 0,
    Op.CHANGE: -1, Op.ASSERT: 0, Op.RETURN: -1, Op.HALT: 0,
}


@dataclass(frozen=True)
class Instr:
    op: Op
    arg: int | None = None  # constant, slot or jump target
    rel: Rel | None = None
    site: int | None = None  # index into IrProgram.sites
    scope: str = "both"  # which versions a division belongs to: both | old | new

    def render(self, slots: tuple[str, ...] = ()) -> str:
        parts = [self.op.value]
        if self.rel is not None:
            parts.append(self.rel.name)
        if self.arg is not None:
            if self.op in (Op.ILOAD, Op.ISTORE) and self.arg < len(slots):
                parts.append(f"{self.arg} ({slots[self.arg]})")
            else:
                parts.append(str(self.arg))
        if self.scope != "both":
            parts.append(f"[{self.scope}]")
        if self.site is not None:
            parts.append(f"@{self.site}")
        return " ".join(parts)


@dataclass(frozen=True)
class Site:
    """A conditional jump, a division or an assertion, tied to its source."""

    id: int
    kind: str  # branch | div | assert
    index: int  # instruction index
    span: Span
    text: str

    @property
    def label(self) -> str:
        return f"{self.kind}@{self.span.line}:{self.span.col}"


@dataclass(frozen=True)
class IrProgram:
    name: str
    params: tuple[str, ...]
    slots: tuple[str, ...]
    code: tuple[Instr, ...]
    sites: tuple[Site, ...]
    has_change: bool

    def listing(self) -> str:
        width = len(str(len(self.code)))
        lines = [f"function {self.name}({', '.join(self.params)})"]
        for i, instr in enumerate(self.code):
            lines.append(f"  {i:>{width}}: {instr.render(self.slots)}")
        if self.sites:
            lines.append("sites:")
            for s in self.sites:
                lines.append(f"  @{s.id} {s.kind} at {s.index} line {s.span.line}:{s.span.col}  {s.text}")
        return "\n".join(lines) + "\n"

    def branch_sites(self) -> list[Site]:
        return [s for s in self.sites if s.kind == "branch"]

    def site_at_line(self, line: int, kind: str = "branch") -> list[Site]:
        return [s for s in self.sites if s.kind == kind and s.span.line == line]
