"""Acceptance criteria 1-8; each test prints one PASS/FAIL line."""

import random
import time

from conftest import ACCEPTANCE, load_ir
from linear import random_conjunction
from partition import partition_violations, random_branch
from programs import random_program
from shadowdiff import subjects
from shadowdiff.core import Const, Constraint, Input, Rel
from shadowdiff.differ import classify_input
from shadowdiff.driver import main
from shadowdiff.engine import (
    BranchCondition,
    ExecState,
    PathConditionPair,
    branch_choices,
    concolic_run,
    run_plain,
    run_shadow,
)
from shadowdiff.frontend import compile_to_ir, parse_program
from shadowdiff.mutator import generate_mutants, unify_versions
from shadowdiff.solver import Conjunction, brute_force_check, check_sat

X = Input("x")


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def test_criterion_1_foo_golden():
    ir = load_ir("foo")
    start = time.perf_counter()
    rep = run_shadow(ir, [{"args": [-1]}], subject="foo")
    elapsed = time.perf_counter() - start
    verdicts = sorted((p.verdict, p.input["x"]) for p in rep.diff_paths)
    ok = (
        len(rep.diff_paths) == 2
        and any(v == "expected-fix" and x == -1 for v, x in verdicts)
        and any(v == "regression-candidate" and x <= -2 for v, x in verdicts)
        and elapsed < 1.0
    )
    report(1, ok, f"{len(rep.diff_paths)} diff paths {verdicts} in {elapsed:.3f}s")


def _sat_status(pc: PathConditionPair) -> str:
    return check_sat(pc.conjunction(["x"])).status.name


def test_criterion_2_fig2_feasibility():
    ir = load_ir("foo")
    # line 3: both versions test x < 0 under an empty path condition
    x_neg = Constraint(Rel.LT, X, Const(0))
    rows = branch_choices(ExecState([], []), BranchCondition(0, x_neg, x_neg, True))
    line3 = {c.kind: _sat_status(PathConditionPair().extend(c.old, c.new)) for c in rows if c.kind.startswith("diff")}
    omitted = [c.kind for c in branch_choices(ExecState([], []), BranchCondition(0, x_neg, x_neg, False))]

    rep = run_shadow(ir, [[-1]], subject="foo")
    line10_site = next(s.id for s in rep.sites if s.line == 10)
    line10 = {n.edge: n.status for n in rep.tree if n.site == line10_site and n.edge.startswith("diff")}

    (point,) = [p for p in concolic_run(ir, [-1]).divergences if p.site == line10_site]
    conj = Conjunction.of(point.snapshot.pc.constraints(), ["x"])
    models = [x for x in range(-300, 301) if all(c.holds({"x": x}) for c in conj.constraints)]
    above = Conjunction.of(conj.constraints + (Constraint(Rel.GT, X, Const(-2)),), ["x"])
    ok = (
        line3 == {"diff_true": "UNSAT", "diff_false": "UNSAT"}
        and "diff_true" not in omitted
        and line10 == {"diff_true": "UNSAT", "diff_false": "SAT"}
        and models
        and max(models) <= -2
        and check_sat(above).is_unsat
    )
    report(2, ok, f"line 3 {line3}, line 10 {line10}, diff_false models max {max(models) if models else None}")


def test_criterion_3_plain_baseline():
    ir = load_ir("foo")
    rep = run_plain(ir, "new", subject="foo")
    inputs = [p.input["x"] for p in rep.paths]
    divergent = [x for x in inputs if classify_input(ir, [x]).verdict != "identical"]
    ok = rep.counters.paths == 4 and len(divergent) == 2
    report(3, ok, f"{rep.counters.paths} paths, divergent inputs {divergent} (expected 4 paths, 2 divergent)")


def test_criterion_4_four_way_partition():
    rng = random.Random(4)
    violations = 0
    for _ in range(200):
        names, pc, cond = random_branch(rng)
        violations += partition_violations(names, pc, cond) > 0
    report(4, violations == 0, f"{violations} violating states out of 200")


def test_criterion_5_divergence_witness():
    mutants = programs = diff_inputs = 0
    violations = []
    for name in ("bank_account", "bank_withdraw", "bank_deposit", "triangle", "foo_base"):
        base = parse_program(subjects.source(name))
        tests = subjects.tests(name)
        specs = generate_mutants(base)
        programs += 1
        for spec in specs:
            ir = compile_to_ir(unify_versions(base, spec))
            mutants += 1
            for path in run_shadow(ir, tests, subject=name).diff_paths:
                diff_inputs += 1
                if classify_input(ir, path.input).verdict == "identical":
                    violations.append((name, spec.describe(), path.input))
    ok = mutants >= 50 and programs >= 3 and diff_inputs > 0 and not violations
    report(5, ok, f"{mutants} mutants over {programs} programs, {diff_inputs} diff inputs, {len(violations)} violations")


def test_criterion_6_solver_oracle():
    rng = random.Random(6)
    start = time.perf_counter()
    violations = 0
    for _ in range(1000):
        conj = random_conjunction(rng)
        ours, oracle = check_sat(conj), brute_force_check(conj)
        if ours.status != oracle.status:
            violations += 1
        elif ours.is_sat and not all(c.holds(ours.model) for c in conj.constraints):
            violations += 1
    elapsed = time.perf_counter() - start
    report(6, violations == 0 and elapsed < 30, f"{violations} violations in {elapsed:.1f}s")


def test_criterion_7_degeneration():
    violations = []
    for seed in range(20):
        ir = compile_to_ir(parse_program(random_program(7000 + seed, params=1 + seed % 3, division=seed % 4 == 0)))
        rng = random.Random(seed)
        tests = [[rng.randint(-8, 8) for _ in ir.params] for _ in range(3)]
        shadow = run_shadow(ir, tests)
        old, new = run_plain(ir, "old"), run_plain(ir, "new")
        if shadow.diff_paths or old.paths != new.paths or old.counters != new.counters:
            violations.append(seed)
    report(7, not violations, f"20 change-free programs, violations {violations}")


def _invocations(tmp_path, tag: str) -> list[bytes]:
    foo, tests = str(subjects.path("foo.sl")), str(subjects.path("foo_tests.json"))
    out = []
    for mode in ("shadow", "plain-new"):
        path = tmp_path / f"{tag}-{mode}.json"
        main(["run", "--program", foo, "--tests", tests, "--mode", mode, "--out", str(path)])
        out.append(path.read_bytes())
    return out


def test_criterion_8_determinism(tmp_path, capsys):
    first, second = _invocations(tmp_path, "a"), _invocations(tmp_path, "b")
    capsys.readouterr()
    report(8, first == second, f"{len(first)} reports compared byte for byte")
