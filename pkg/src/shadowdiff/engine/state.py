"""Execution states, choices and path records of the shadow interpreter."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..core import Constraint, ShadowValue, SymExpr, render
from ..solver import DEFAULT_NODE_LIMIT, Conjunction

CHOICE_KINDS = ("same_true", "same_false", "diff_true", "diff_false")
DIFF_KINDS = ("diff_true", "diff_false")
KIND_ORDER = {kind: i for i, kind in enumerate(CHOICE_KINDS)}

Condition = Constraint | bool


@dataclass(frozen=True)
class EngineConfig:
    bse_depth: int | None = 20  # None: unbounded; 0: stop at the first symbolic branch
    loop_bound: int = 32
    step_budget: int = 1_000_000
    emit_smt: str | None = None
    solver: str = "builtin"
    node_limit: int = DEFAULT_NODE_LIMIT

    def __post_init__(self):
        if self.solver != "builtin":
            raise ValueError(f"unknown solver backend {self.solver!r}")
        if self.bse_depth is not None and self.bse_depth < 0:
            object.__setattr__(self, "bse_depth", None)

    def to_dict(self) -> dict:
        return {
            "bse_depth": self.bse_depth,
            "loop_bound": self.loop_bound,
            "step_budget": self.step_budget,
            "solver": self.solver,
            "node_limit": self.node_limit,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> EngineConfig:
        return cls(
            bse_depth=d.get("bse_depth", 20),
            loop_bound=d.get("loop_bound", 32),
            step_budget=d.get("step_budget", 1_000_000),
            solver=d.get("solver", "builtin"),
            node_limit=d.get("node_limit", DEFAULT_NODE_LIMIT),
        )


def _append(pc: tuple[Constraint, ...], c: Condition) -> tuple[Constraint, ...]:
    if c is True:
        return pc
    if c is False:
        raise ValueError("cannot extend a path condition with false")
    return pc + (c,)


@dataclass(frozen=True)
class PathConditionPair:
    pc_old: tuple[Constraint, ...] = ()
    pc_new: tuple[Constraint, ...] = ()

    def extend(self, old: Condition, new: Condition) -> PathConditionPair:
        return PathConditionPair(_append(self.pc_old, old), _append(self.pc_new, new))

    def extend_both(self, c: Condition) -> PathConditionPair:
        return self.extend(c, c)

    def constraints(self) -> tuple[Constraint, ...]:
        """``pc_old`` followed by the ``pc_new`` constraints not already in it."""
        seen = set(self.pc_old)
        out = list(self.pc_old)
        for c in self.pc_new:
            if c not in seen:
                seen.add(c)
                out.append(c)
        return tuple(out)

    def conjunction(self, inputs: Iterable[str] = ()) -> Conjunction:
        return Conjunction.of(self.constraints(), inputs)

    def canonical(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return tuple(c.render() for c in self.pc_old), tuple(c.render() for c in self.pc_new)

    def render(self) -> tuple[str, str]:
        old, new = self.canonical()
        return " && ".join(old) or "true", " && ".join(new) or "true"


@dataclass(frozen=True)
class Choice:
    """One way to continue from a branch.

    ``old``/``new`` are the conditions appended to each version's path
    condition. A ``concrete`` choice also names the row it realizes.
    """

    kind: str
    old: Condition
    new: Condition
    realizes: str | None = None

    @property
    def trivially_false(self) -> bool:
        return self.old is False or self.new is False


@dataclass(frozen=True)
class BranchCondition:
    """A two-way decision, seen from both versions.

    For conditional jumps "true" means the jump is taken; for divisions it
    means the divisor is nonzero and execution continues.
    """

    site: int
    c_old: Condition
    c_new: Condition
    has_diff: bool
    dir_old: bool | None = None
    dir_new: bool | None = None


@dataclass
class ExecState:
    slots: list
    stack: list
    ip: int = 0
    pc: PathConditionPair = field(default_factory=PathConditionPair)
    depth: int = 0
    loops: dict[int, int] = field(default_factory=dict)
    phase: str = "concolic"  # concolic | bse | plain
    steps: int = 0
    touched: bool = False
    node: int | None = None  # id of the tree node this state descends from
    forced: bool | None = None  # direction to take at the branch under ip

    def copy(self, **changes) -> ExecState:
        state = ExecState(
            list(self.slots),
            list(self.stack),
            self.ip,
            self.pc,
            self.depth,
            dict(self.loops),
            self.phase,
            self.steps,
            self.touched,
            self.node,
            self.forced,
        )
        for key, value in changes.items():
            setattr(state, key, value)
        return state


@dataclass(frozen=True)
class Terminal:
    kind: str  # return | assertion-failure | div-by-zero | loop-bound-hit | step-budget-hit | depth-bound-hit | diverged
    site: int | None = None
    value: str | None = None  # rendered return expression

    def describe(self) -> str:
        text = self.kind
        if self.value is not None:
            text += f" {self.value}"
        if self.site is not None:
            text += f" @{self.site}"
        return text

    def to_dict(self) -> dict:
        return {"kind": self.kind, "site": self.site, "value": self.value}

    @classmethod
    def from_dict(cls, d: Mapping) -> Terminal:
        return cls(d["kind"], d.get("site"), d.get("value"))


def returned(value: SymExpr | ShadowValue | None) -> Terminal:
    if value is None:
        return Terminal("return")
    if isinstance(value, ShadowValue):
        if value.is_diff:
            return Terminal("return", value=f"{render(value.old_expr)} | {render(value.new_expr)}")
        value = value.new_expr
    return Terminal("return", value=render(value))


@dataclass(frozen=True)
class PathRecord:
    terminal: Terminal
    pc: PathConditionPair
    input: dict[str, int] | None
    provenance: str  # concolic | concolic-diff | bse | plain
    origin: str = ""  # test or divergence point this record came from

    def key(self):
        return self.pc.canonical(), self.terminal


@dataclass
class DivergencePoint:
    snapshot: ExecState
    kind: str
    site: int
    witness: dict[str, int]
    origin: str = ""
    id: int = -1
    program: object = field(default=None, repr=False, compare=False)

    def key(self):
        return self.site, self.kind, self.snapshot.pc.canonical()
