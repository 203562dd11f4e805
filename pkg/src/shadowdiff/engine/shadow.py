"""Concolic shadow execution, divergence points and the two-phase driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .. import __version__
from ..core import (
    Const,
    Input,
    Rel,
    ShadowDivisionError,
    ShadowValue,
    compare,
    condition_of,
    shadow_binop,
    shadow_change,
    shadow_cmp,
    shadow_neg,
)
from ..differ import bind_inputs, classify_input
from ..frontend.ir import IrProgram, Op
from ..report import (
    Counters,
    DiffPath,
    DivergenceSummary,
    PlainPath,
    PlainReport,
    ShadowReport,
    SiteInfo,
    TestSummary,
)
from .choices import branch_choices, directions
from .explore import Explorer, entry_state
from .session import SolverSession
from .state import (
    DIFF_KINDS,
    BranchCondition,
    DivergencePoint,
    EngineConfig,
    ExecState,
    PathConditionPair,
    PathRecord,
    Terminal,
    returned,
)

_ARITH = {Op.IADD: "+", Op.ISUB: "-", Op.IMUL: "*", Op.IDIV: "/", Op.IREM: "%"}


@dataclass
class ConcolicResult:
    records: list[PathRecord]
    divergences: list[DivergencePoint]
    touched: bool
    diverged: bool

    def __iter__(self):
        # Allows ``trace, divergences = concolic_run(...)``.
        return iter((self.records, self.divergences))


@dataclass
class _Concolic:
    ir: IrProgram
    binding: dict[str, int]
    cfg: EngineConfig
    session: SolverSession
    origin: str
    divergences: list[DivergencePoint] = field(default_factory=list)

    def decide(self, state: ExecState, cond: BranchCondition) -> bool | PathRecord:
        """Probe the diff choices, then follow the concrete one.

        Returns the direction to take, or a ``concolic-diff`` record when the
        two concrete executions part ways here.
        """
        choices = branch_choices(state, cond)
        concrete = choices[-1]
        realized = concrete.realizes
        parent = state.node
        for choice in choices[:-1]:
            if choice.kind not in DIFF_KINDS or choice.kind == realized:
                continue
            if choice.trivially_false:
                self.session.node(parent, choice.kind, cond.site, state.pc, "UNSAT", "trivially false")
                continue
            pc = state.pc.extend(choice.old, choice.new)
            result = self.session.check(pc.constraints())
            node = self.session.node(parent, choice.kind, cond.site, pc, result.status.name)
            if not result.is_sat:
                continue
            witness = self.session.model(pc.constraints())
            if witness is None:
                continue
            snapshot = state.copy(pc=pc, phase="bse", forced=directions(choice.kind)[1], node=node)
            self.divergences.append(DivergencePoint(snapshot, choice.kind, cond.site, witness, self.origin))
        state.pc = state.pc.extend(concrete.old, concrete.new)
        state.node = self.session.node(parent, "concrete", cond.site, state.pc, "SAT", realized)
        if realized in DIFF_KINDS:
            return PathRecord(
                Terminal("diverged", site=cond.site), state.pc, dict(self.binding), "concolic-diff", self.origin
            )
        return cond.dir_new

    def run(self, state: ExecState) -> PathRecord:
        code = self.ir.code
        while True:
            if state.steps >= self.cfg.step_budget:
                return self.finish(state, Terminal("step-budget-hit"))
            instr = code[state.ip]
            op = instr.op
            stack = state.stack
            state.steps += 1
            if op is Op.IPUSH:
                stack.append(ShadowValue.concrete(instr.arg))
            elif op is Op.ILOAD:
                stack.append(state.slots[instr.arg])
            elif op is Op.ISTORE:
                state.slots[instr.arg] = stack.pop()
            elif op in _ARITH:
                b, a = stack[-1], stack[-2]
                ignore = frozenset()
                if op in (Op.IDIV, Op.IREM):
                    outcome = self.division(state, instr, b)
                    if isinstance(outcome, PathRecord):
                        return outcome
                    ignore = outcome
                del stack[-2:]
                stack.append(shadow_binop(_ARITH[op], a, b, ignore))
            elif op is Op.INEG:
                stack.append(shadow_neg(stack.pop()))
            elif op is Op.CMP:
                b, a = stack.pop(), stack.pop()
                stack.append(shadow_cmp(instr.rel, a, b))
            elif op is Op.IF_CMP or op is Op.IF_TRUE:
                if op is Op.IF_CMP:
                    a, b = stack[-2], stack[-1]
                    c_old = compare(instr.rel, a.old_expr, b.old_expr)
                    c_new = compare(instr.rel, a.new_expr, b.new_expr)
                    d_old = instr.rel.holds(a.conc_old, b.conc_old)
                    d_new = instr.rel.holds(a.conc_new, b.conc_new)
                    has_diff = a.is_diff or b.is_diff
                else:
                    v = stack[-1]
                    c_old, c_new = condition_of(v.old_expr), condition_of(v.new_expr)
                    d_old, d_new = v.conc_old != 0, v.conc_new != 0
                    has_diff = v.is_diff
                direction = self.branch(state, BranchCondition(instr.site, c_old, c_new, has_diff, d_old, d_new))
                if isinstance(direction, PathRecord):
                    return direction
                del stack[-2 if op is Op.IF_CMP else -1 :]
                state.ip = instr.arg if direction else state.ip + 1
                continue
            elif op is Op.GOTO:
                if instr.arg <= state.ip:
                    state.loops[state.ip] = state.loops.get(state.ip, 0) + 1
                    if state.loops[state.ip] > self.cfg.loop_bound:
                        return self.finish(state, Terminal("loop-bound-hit"))
                state.ip = instr.arg
                continue
            elif op is Op.CHANGE:
                new, old = stack.pop(), stack.pop()
                stack.append(shadow_change(old, new))
                state.touched = True
            elif op is Op.ASSERT:
                return self.finish(state, Terminal("assertion-failure", site=instr.site))
            elif op is Op.RETURN:
                value = stack.pop()
                kind = "concolic-diff" if value.conc_old != value.conc_new else "concolic"
                return self.finish(state, returned(value), kind)
            elif op is Op.HALT:
                return self.finish(state, returned(None))
            else:
                raise AssertionError(f"unhandled instruction {instr}")
            state.ip += 1

    def branch(self, state: ExecState, cond: BranchCondition) -> bool | PathRecord:
        symbolic = not (isinstance(cond.c_old, bool) and isinstance(cond.c_new, bool))
        if not symbolic and cond.dir_old == cond.dir_new:
            return cond.dir_new
        return self.decide(state, cond)

    def division(self, state: ExecState, instr, divisor: ShadowValue) -> frozenset | PathRecord:
        """Treat a division as a branch on a nonzero divisor.

        Returns the versions whose zero divisor must be ignored because the
        division is outside their side of a ``change``.
        """
        in_old = instr.scope in ("both", "old")
        in_new = instr.scope in ("both", "new")
        ignore = frozenset(v for v, inside in (("old", in_old), ("new", in_new)) if not inside)
        if divisor.is_concrete and divisor.conc_new != 0:
            return ignore
        c_old = compare(Rel.NE, divisor.old_expr, Const(0)) if in_old else True
        c_new = compare(Rel.NE, divisor.new_expr, Const(0)) if in_new else True
        d_old = divisor.conc_old != 0 or not in_old
        d_new = divisor.conc_new != 0 or not in_new
        direction = self.branch(state, BranchCondition(instr.site, c_old, c_new, divisor.is_diff, d_old, d_new))
        if isinstance(direction, PathRecord):
            return direction
        if not direction:
            return self.finish(state, Terminal("div-by-zero", site=instr.site))
        return ignore

    def finish(self, state: ExecState, terminal: Terminal, provenance: str = "concolic") -> PathRecord:
        return PathRecord(terminal, state.pc, dict(self.binding), provenance, self.origin)


def _shadow_entry(ir: IrProgram, binding: Mapping[str, int]) -> ExecState:
    slots = [ShadowValue.concrete(0)] * len(ir.slots)
    for i, name in enumerate(ir.params):
        slots[i] = ShadowValue(binding[name], binding[name], Input(name))
    return ExecState(slots, [], phase="concolic")


def concolic_run(
    ir: IrProgram,
    inputs: Mapping[str, int] | Sequence[int],
    cfg: EngineConfig | None = None,
    session: SolverSession | None = None,
    origin: str = "test 0",
) -> ConcolicResult:
    """Follow the concrete path of ``inputs`` through both versions.

    Every satisfiable diff choice met on the way becomes a divergence point.
    The run stops early when the two concrete executions take different
    directions.
    """
    cfg = cfg or EngineConfig()
    session = session or SolverSession(ir.params, cfg.node_limit, cfg.emit_smt)
    binding = bind_inputs(ir, inputs)
    runner = _Concolic(ir, binding, cfg, session, origin)
    state = _shadow_entry(ir, binding)
    state.node = session.node(None, origin, None, state.pc, "ROOT", _describe_args(binding))
    record = runner.run(state)
    for dp in runner.divergences:
        dp.program = ir
    return ConcolicResult([record], runner.divergences, state.touched, record.provenance == "concolic-diff")


def _describe_args(binding: Mapping[str, int]) -> str:
    return ", ".join(f"{k}={v}" for k, v in binding.items())


def _bse_root(dp: DivergencePoint) -> ExecState:
    snap = dp.snapshot
    state = snap.copy(phase="bse", depth=0)
    state.slots = [v.new_expr if isinstance(v, ShadowValue) else v for v in snap.slots]
    state.stack = [v.new_expr if isinstance(v, ShadowValue) else v for v in snap.stack]
    return state


def bse_explore(
    dp: DivergencePoint,
    cfg: EngineConfig | None = None,
    ir: IrProgram | None = None,
    session: SolverSession | None = None,
) -> list[PathRecord]:
    """Breadth-first exploration of the new version from a divergence point."""
    cfg = cfg or EngineConfig()
    ir = ir or dp.program
    session = session or SolverSession(ir.params, cfg.node_limit, cfg.emit_smt)
    explorer = Explorer(ir, "new", cfg, session, "bse")
    origin = f"dp {dp.id}" if dp.id >= 0 else f"dp @{dp.site}"
    return explorer.explore([_bse_root(dp)], origin)


def _sites(ir: IrProgram) -> list[SiteInfo]:
    return [SiteInfo(s.id, s.kind, s.span.line, s.span.col, s.text) for s in ir.sites]


def _test_args(ir: IrProgram, test) -> tuple[str, dict[str, int]]:
    if isinstance(test, Mapping) and "args" in test:
        return str(test.get("name") or ""), bind_inputs(ir, test["args"])
    return "", bind_inputs(ir, test)


def run_shadow(
    ir: IrProgram,
    tests: Sequence,
    cfg: EngineConfig | None = None,
    subject: str | None = None,
) -> ShadowReport:
    """Both phases over all tests, with every diff input classified."""
    cfg = cfg or EngineConfig()
    if not tests:
        raise ValueError("shadow mode needs at least one test input")
    session = SolverSession(ir.params, cfg.node_limit, cfg.emit_smt)
    summaries: list[TestSummary] = []
    records: list[PathRecord] = []
    diff_records: list[PathRecord] = []
    points: list[DivergencePoint] = []
    seen_points: dict = {}
    for index, test in enumerate(tests):
        name, binding = _test_args(ir, test)
        name = name or f"test {index}"
        result = concolic_run(ir, binding, cfg, session, origin=name)
        own = []
        for dp in result.divergences:
            key = dp.key()
            if key in seen_points:
                own.append(seen_points[key])
                continue
            dp.id = len(points)
            seen_points[key] = dp.id
            points.append(dp)
            own.append(dp.id)
        final = result.records[-1]
        records.extend(result.records)
        diff_records.extend(r for r in result.records if r.provenance == "concolic-diff")
        if not result.touched:
            session.warnings.append(f"{name} did not touch the patch")
        summaries.append(
            TestSummary(index, name, binding, result.touched, final.terminal.to_dict(), result.diverged, own)
        )
    for dp in points:
        found = bse_explore(dp, cfg, ir, session)
        records.extend(found)
        diff_records.extend(found)
    diff_paths: list[DiffPath] = []
    seen_paths = set()
    for record in diff_records:
        key = record.key()
        if key in seen_paths:
            continue
        seen_paths.add(key)
        if record.input is None:
            session.warnings.append(f"diff path without input dropped: {record.terminal.describe()}")
            continue
        verdict = classify_input(ir, record.input, cfg)
        old, new = record.pc.canonical()
        diff_paths.append(
            DiffPath(
                len(diff_paths),
                record.provenance,
                record.origin,
                record.terminal.to_dict(),
                list(old),
                list(new),
                dict(record.input),
                verdict.verdict,
                verdict.old.to_dict(),
                verdict.new.to_dict(),
            )
        )
    summaries_dp = [
        DivergenceSummary(
            dp.id,
            dp.site,
            ir.sites[dp.site].span.line,
            dp.kind,
            dict(dp.witness),
            dp.origin,
            list(dp.snapshot.pc.canonical()[0]),
            list(dp.snapshot.pc.canonical()[1]),
        )
        for dp in points
    ]
    counters = Counters(
        nodes=sum(1 for n in session.nodes if n.status != "ROOT"),
        solver_queries=session.queries,
        cache_hits=session.cache_hits,
        paths=len(records),
        diff_paths=len(diff_paths),
    )
    return ShadowReport(
        subject=subject or ir.name,
        tool_version=__version__,
        config=cfg.to_dict(),
        sites=_sites(ir),
        tests=summaries,
        divergence_points=summaries_dp,
        diff_paths=diff_paths,
        counters=counters,
        warnings=list(session.warnings),
        tree=list(session.nodes),
    )


def run_plain(
    ir: IrProgram,
    version: str = "new",
    cfg: EngineConfig | None = None,
    subject: str | None = None,
    classify: bool = True,
) -> PlainReport:
    """Classic two-way symbolic execution of one version."""
    if version not in ("old", "new"):
        raise ValueError(f"version must be 'old' or 'new', not {version!r}")
    cfg = cfg or EngineConfig()
    session = SolverSession(ir.params, cfg.node_limit, cfg.emit_smt)
    explorer = Explorer(ir, version, cfg, session, "plain")
    root = entry_state(ir, "plain")
    root.node = session.node(None, f"plain {version}", None, PathConditionPair(), "ROOT")
    found = explorer.explore([root], f"plain {version}")
    paths = []
    for record in found:
        verdict = None
        if classify and record.input is not None:
            verdict = classify_input(ir, record.input, cfg)
        paths.append(
            PlainPath(
                len(paths),
                record.terminal.to_dict(),
                list(record.pc.canonical()[1]),
                None if record.input is None else dict(record.input),
                None if verdict is None else verdict.verdict,
                None if verdict is None else verdict.old.to_dict(),
                None if verdict is None else verdict.new.to_dict(),
            )
        )
    counters = Counters(
        nodes=sum(1 for n in session.nodes if n.status != "ROOT"),
        solver_queries=session.queries,
        cache_hits=session.cache_hits,
        paths=len(paths),
        diff_paths=sum(1 for p in paths if p.verdict not in (None, "identical")),
    )
    return PlainReport(
        subject=subject or ir.name,
        tool_version=__version__,
        version=version,
        config=cfg.to_dict(),
        sites=_sites(ir),
        paths=paths,
        counters=counters,
        warnings=list(session.warnings),
        tree=list(session.nodes),
    )
