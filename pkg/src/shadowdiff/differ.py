"""Concrete dual-version execution and verdicts for generated inputs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import div32, rem32, wrap
from .frontend.ir import IrProgram, Op

VERSIONS = ("old", "new")
ERROR_KINDS = frozenset({"assertion-failure", "div-by-zero"})
BOUND_KINDS = frozenset({"loop-bound-hit", "step-budget-hit"})
VERDICTS = ("identical", "expected-fix", "regression-candidate", "behavioral-diff")


@dataclass(frozen=True)
class ConcreteOutcome:
    kind: str  # returned | assertion-failure | div-by-zero | loop-bound-hit | step-budget-hit
    value: int | None = None
    site: int | None = None
    trace: tuple[tuple[int, bool], ...] = ()  # (branch site id, direction)

    @property
    def is_error(self) -> bool:
        return self.kind in ERROR_KINDS

    def describe(self) -> str:
        if self.kind == "returned":
            return "returned" if self.value is None else f"returned {self.value}"
        return self.kind if self.site is None else f"{self.kind} @{self.site}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "site": self.site,
            "trace": [[s, d] for s, d in self.trace],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> ConcreteOutcome:
        return cls(d["kind"], d["value"], d["site"], tuple((s, bool(b)) for s, b in d["trace"]))


@dataclass(frozen=True)
class Classification:
    verdict: str
    old: ConcreteOutcome
    new: ConcreteOutcome

    @property
    def diverges(self) -> bool:
        return self.verdict != "identical"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "old": self.old.to_dict(), "new": self.new.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> Classification:
        return cls(d["verdict"], ConcreteOutcome.from_dict(d["old"]), ConcreteOutcome.from_dict(d["new"]))


@dataclass(frozen=True)
class RunLimits:
    loop_bound: int = 32
    step_budget: int = 1_000_000


def bind_inputs(ir: IrProgram, inputs: Mapping[str, int] | Sequence[int]) -> dict[str, int]:
    """Normalize positional or named arguments to a name → value map."""
    if isinstance(inputs, Mapping):
        missing = [p for p in ir.params if p not in inputs]
        if missing:
            raise ValueError(f"missing inputs: {', '.join(missing)}")
        return {p: wrap(int(inputs[p])) for p in ir.params}
    values = list(inputs)
    if len(values) != len(ir.params):
        raise ValueError(f"{ir.name} expects {len(ir.params)} arguments, got {len(values)}")
    return {p: wrap(int(v)) for p, v in zip(ir.params, values)}


def _limits(cfg) -> RunLimits:
    if cfg is None:
        return RunLimits()
    return RunLimits(cfg.loop_bound, cfg.step_budget)


def exec_concrete_version(ir: IrProgram, version: str, inputs, cfg=None) -> ConcreteOutcome:
    """Run one version concretely; each CHANGE keeps that version's operand."""
    if version not in VERSIONS:
        raise ValueError(f"version must be 'old' or 'new', not {version!r}")
    limits = _limits(cfg)
    binding = bind_inputs(ir, inputs)
    code = ir.code
    slots = [0] * len(ir.slots)
    for i, p in enumerate(ir.params):
        slots[i] = binding[p]
    stack: list[int] = []
    trace: list[tuple[int, bool]] = []
    loops: dict[int, int] = {}
    ip = 0
    steps = 0
    while True:
        if steps >= limits.step_budget:
            return ConcreteOutcome("step-budget-hit", None, None, tuple(trace))
        steps += 1
        instr = code[ip]
        op = instr.op
        ip += 1
        if op is Op.IPUSH:
            stack.append(instr.arg)
        elif op is Op.ILOAD:
            stack.append(slots[instr.arg])
        elif op is Op.ISTORE:
            slots[instr.arg] = stack.pop()
        elif op in (Op.IADD, Op.ISUB, Op.IMUL):
            b, a = stack.pop(), stack.pop()
            r = a + b if op is Op.IADD else a - b if op is Op.ISUB else a * b
            stack.append(wrap(r))
        elif op in (Op.IDIV, Op.IREM):
            b, a = stack.pop(), stack.pop()
            if b == 0:
                if instr.scope in ("both", version):
                    return ConcreteOutcome("div-by-zero", None, instr.site, tuple(trace))
                stack.append(0)
            else:
                stack.append(div32(a, b) if op is Op.IDIV else rem32(a, b))
        elif op is Op.INEG:
            stack.append(wrap(-stack.pop()))
        elif op is Op.CMP:
            b, a = stack.pop(), stack.pop()
            stack.append(int(instr.rel.holds(a, b)))
        elif op is Op.IF_CMP or op is Op.IF_TRUE:
            if op is Op.IF_CMP:
                b, a = stack.pop(), stack.pop()
                taken = instr.rel.holds(a, b)
            else:
                taken = stack.pop() != 0
            trace.append((instr.site, taken))
            if taken:
                ip = instr.arg
        elif op is Op.GOTO:
            if instr.arg < ip:
                edge = ip - 1
                loops[edge] = loops.get(edge, 0) + 1
                if loops[edge] > limits.loop_bound:
                    return ConcreteOutcome("loop-bound-hit", None, None, tuple(trace))
            ip = instr.arg
        elif op is Op.CHANGE:
            new, old = stack.pop(), stack.pop()
            stack.append(old if version == "old" else new)
        elif op is Op.ASSERT:
            return ConcreteOutcome("assertion-failure", None, instr.site, tuple(trace))
        elif op is Op.RETURN:
            return ConcreteOutcome("returned", stack.pop(), None, tuple(trace))
        elif op is Op.HALT:
            return ConcreteOutcome("returned", None, None, tuple(trace))
        else:
            raise AssertionError(f"unhandled instruction {instr}")


def verdict(old: ConcreteOutcome, new: ConcreteOutcome) -> str:
    if old == new:
        return "identical"
    if old.is_error and new.kind == "returned":
        return "expected-fix"
    if old.kind == "returned" and new.is_error:
        return "regression-candidate"
    return "behavioral-diff"


def classify_input(ir: IrProgram, inputs, cfg=None) -> Classification:
    old = exec_concrete_version(ir, "old", inputs, cfg)
    new = exec_concrete_version(ir, "new", inputs, cfg)
    return Classification(verdict(old, new), old, new)

