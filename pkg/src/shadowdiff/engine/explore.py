"""Breadth-first symbolic exploration of a single program version.

Used for the bounded phase started at divergence points (new version only)
and for plain symbolic execution of either version. Slots hold ``SymExpr``
values; path constraints go to the explored version's list (to both lists
in plain mode, where there is only one version).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..core import Const, Input, Rel, SymExpr, binary, compare, condition_of, neg, negate_condition
from ..frontend.ir import IrProgram, Op
from .session import SolverSession
from .state import Condition, EngineConfig, ExecState, PathRecord, Terminal, returned

_ARITH = {Op.IADD: "+", Op.ISUB: "-", Op.IMUL: "*", Op.IDIV: "/", Op.IREM: "%"}


@dataclass(frozen=True)
class Fork:
    site: int
    cond: Condition


class Explorer:
    def __init__(self, ir: IrProgram, version: str, cfg: EngineConfig, session: SolverSession, provenance: str):
        self.ir = ir
        self.version = version
        self.cfg = cfg
        self.session = session
        self.provenance = provenance
        self.plain = provenance == "plain"

    # -- one path up to its next fork ---------------------------------------

    def _branch_or_forced(self, state: ExecState, site: int, cond: Condition) -> bool | Fork:
        if state.forced is not None:
            direction, state.forced = state.forced, None
            return direction
        if isinstance(cond, bool):
            return cond
        return Fork(site, cond)

    def advance(self, state: ExecState) -> Terminal | Fork:
        """Execute ``state`` in place until it terminates or must fork."""
        code = self.ir.code
        while True:
            if state.steps >= self.cfg.step_budget:
                return Terminal("step-budget-hit")
            instr = code[state.ip]
            op = instr.op
            stack = state.stack
            if op is Op.IPUSH:
                stack.append(Const(instr.arg))
            elif op is Op.ILOAD:
                stack.append(state.slots[instr.arg])
            elif op is Op.ISTORE:
                state.slots[instr.arg] = stack.pop()
            elif op in _ARITH:
                if op in (Op.IDIV, Op.IREM) and instr.scope in ("both", self.version):
                    decision = self._branch_or_forced(state, instr.site, compare(Rel.NE, stack[-1], Const(0)))
                    if isinstance(decision, Fork):
                        return decision
                    if not decision:
                        state.steps += 1
                        return Terminal("div-by-zero", site=instr.site)
                b, a = stack.pop(), stack.pop()
                stack.append(binary(_ARITH[op], a, b))
            elif op is Op.INEG:
                stack.append(neg(stack.pop()))
            elif op is Op.CMP:
                b, a = stack.pop(), stack.pop()
                stack.append(binary(instr.rel.value, a, b))
            elif op is Op.IF_CMP or op is Op.IF_TRUE:
                if op is Op.IF_CMP:
                    cond = compare(instr.rel, stack[-2], stack[-1])
                else:
                    cond = condition_of(stack[-1])
                decision = self._branch_or_forced(state, instr.site, cond)
                if isinstance(decision, Fork):
                    return decision
                del stack[-2 if op is Op.IF_CMP else -1 :]
                state.steps += 1
                state.ip = instr.arg if decision else state.ip + 1
                continue
            elif op is Op.GOTO:
                state.steps += 1
                if instr.arg <= state.ip:
                    state.loops[state.ip] = state.loops.get(state.ip, 0) + 1
                    if state.loops[state.ip] > self.cfg.loop_bound:
                        return Terminal("loop-bound-hit")
                state.ip = instr.arg
                continue
            elif op is Op.CHANGE:
                new, old = stack.pop(), stack.pop()
                stack.append(old if self.version == "old" else new)
                state.touched = True
            elif op is Op.ASSERT:
                state.steps += 1
                return Terminal("assertion-failure", site=instr.site)
            elif op is Op.RETURN:
                state.steps += 1
                return returned(stack.pop())
            elif op is Op.HALT:
                state.steps += 1
                return returned(None)
            else:
                raise AssertionError(f"unhandled instruction {instr}")
            state.steps += 1
            state.ip += 1

    # -- frontier -----------------------------------------------------------

    def _extend(self, state: ExecState, cond: Condition):
        if self.plain:
            return state.pc.extend_both(cond)
        if self.version == "new":
            return state.pc.extend(True, cond)
        return state.pc.extend(cond, True)

    def _record(self, state: ExecState, terminal: Terminal, origin: str) -> PathRecord:
        model = self.session.model(state.pc.constraints())
        return PathRecord(terminal, state.pc, model, self.provenance, origin)

    def explore(self, roots: list[ExecState], origin: str = "") -> list[PathRecord]:
        records: list[PathRecord] = []
        frontier: list = []
        seq = 0
        for state in roots:
            heapq.heappush(frontier, (state.depth, -1, 0, seq, state))
            seq += 1
        bound = self.cfg.bse_depth
        while frontier:
            *_, state = heapq.heappop(frontier)
            outcome = self.advance(state)
            if isinstance(outcome, Terminal):
                records.append(self._record(state, outcome, origin))
                continue
            if bound is not None and state.depth >= bound:
                records.append(self._record(state, Terminal("depth-bound-hit", site=outcome.site), origin))
                continue
            for order, direction in enumerate((True, False)):
                cond = outcome.cond if direction else negate_condition(outcome.cond)
                pc = self._extend(state, cond)
                result = self.session.check(pc.constraints())
                status = result.status.name
                node = self.session.node(state.node, "true" if direction else "false", outcome.site, pc, status)
                if not result.is_sat:
                    continue
                child = state.copy(pc=pc, depth=state.depth + 1, forced=direction, node=node)
                heapq.heappush(frontier, (child.depth, outcome.site, order, seq, child))
                seq += 1
        return records


def entry_state(ir: IrProgram, phase: str) -> ExecState:
    slots: list[SymExpr] = [Const(0)] * len(ir.slots)
    for i, name in enumerate(ir.params):
        slots[i] = Input(name)
    return ExecState(slots, [], phase=phase)
