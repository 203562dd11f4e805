"""Four-way forking plus the concrete choice at a branch."""

from __future__ import annotations

from ..core import negate_condition
from .state import BranchCondition, Choice, ExecState


def realized_kind(dir_old: bool, dir_new: bool) -> str:
    if dir_old == dir_new:
        return "same_true" if dir_new else "same_false"
    return "diff_true" if dir_new else "diff_false"


def directions(kind: str) -> tuple[bool, bool]:
    """(old direction, new direction) of a choice kind."""
    return {
        "same_true": (True, True),
        "same_false": (False, False),
        "diff_true": (False, True),
        "diff_false": (True, False),
    }[kind]


def branch_choices(state: ExecState, cond: BranchCondition) -> list[Choice]:
    """Symbolic choices in canonical order, then the concrete one if known.

    The diff choices are left out when neither operand carries a diff and
    both path conditions are still equal: the versions cannot disagree yet.
    """
    c_old, c_new = cond.c_old, cond.c_new
    n_old, n_new = negate_condition(c_old), negate_condition(c_new)
    choices = [
        Choice("same_true", c_old, c_new),
        Choice("same_false", n_old, n_new),
    ]
    if cond.has_diff or state.pc.pc_old != state.pc.pc_new:
        choices.append(Choice("diff_true", n_old, c_new))
        choices.append(Choice("diff_false", c_old, n_new))
    if cond.dir_old is not None and cond.dir_new is not None:
        kind = realized_kind(cond.dir_old, cond.dir_new)
        row = next(
            (c for c in choices if c.kind == kind),
            Choice(kind, c_old if cond.dir_old else n_old, c_new if cond.dir_new else n_new),
        )
        choices.append(Choice("concrete", row.old, row.new, realizes=kind))
    return choices
