from shadowdiff.differ import Classification, ConcreteOutcome, bind_inputs, classify_input, exec_concrete_version, verdict
from shadowdiff.engine import EngineConfig
from shadowdiff.frontend import compile_to_ir, parse_program


def ir_of(src):
    return compile_to_ir(parse_program(src))


def test_foo_versions(foo_ir):
    old = exec_concrete_version(foo_ir, "old", {"x": -1})
    new = exec_concrete_version(foo_ir, "new", {"x": -1})
    assert old.kind == "assertion-failure" and old.site == 5
    assert new.kind == "returned" and new.value == 1
    assert classify_input(foo_ir, [-1]).verdict == "expected-fix"
    assert classify_input(foo_ir, [-2]).verdict == "regression-candidate"
    assert classify_input(foo_ir, [0]).verdict == "identical"
    # y = 10 flips to -10 and reaches the assertion
    assert classify_input(foo_ir, [5]).verdict == "regression-candidate"


def test_trace_lists_branch_sites_only(foo_ir):
    assert exec_concrete_version(foo_ir, "old", {"x": 3}).trace == ((0, False), (1, True))
    out = exec_concrete_version(foo_ir, "new", {"x": 3})
    assert out.trace == ((0, False), (1, False), (2, False), (3, True), (4, False))


def test_verdict_table():
    ret1 = ConcreteOutcome("returned", 1)
    ret2 = ConcreteOutcome("returned", 2)
    fail = ConcreteOutcome("assertion-failure", site=3)
    zero = ConcreteOutcome("div-by-zero", site=1)
    bound = ConcreteOutcome("loop-bound-hit", site=2)
    assert verdict(ret1, ret1) == "identical"
    assert verdict(fail, ret1) == "expected-fix"
    assert verdict(zero, ret1) == "expected-fix"
    assert verdict(ret1, fail) == "regression-candidate"
    assert verdict(ret1, ret2) == "behavioral-diff"
    assert verdict(fail, zero) == "behavioral-diff"
    assert verdict(bound, ret1) == "behavioral-diff"
    assert verdict(ret1, bound) == "behavioral-diff"


def test_same_result_different_path_is_a_diff():
    ir = ir_of("int f(int x) { int r = 0; if (change(x > 0, x >= 0)) { r = 0; } return r; }")
    assert classify_input(ir, [0]).verdict == "behavioral-diff"


def test_out_of_scope_division_is_ignored():
    ir = ir_of("int f(int x) { int q = change(1, 10 / x); return q; }")
    assert exec_concrete_version(ir, "old", {"x": 0}) == ConcreteOutcome("returned", 1)
    assert exec_concrete_version(ir, "new", {"x": 0}).kind == "div-by-zero"


def test_division_semantics():
    ir = ir_of("int f(int a, int b) { return a / b + a % b; }")
    assert exec_concrete_version(ir, "new", {"a": -7, "b": 2}).value == -3 + -1
    assert exec_concrete_version(ir, "new", {"a": -2147483648, "b": -1}).value == -2147483648


def test_loop_and_step_limits():
    ir = ir_of("int f(int n) { while (n > 0) { n = n - 1; } return n; }")
    assert exec_concrete_version(ir, "new", {"n": 40}).kind == "loop-bound-hit"
    assert exec_concrete_version(ir, "new", {"n": 40}, EngineConfig(loop_bound=64)).value == 0
    assert exec_concrete_version(ir, "new", {"n": 40}, EngineConfig(loop_bound=64, step_budget=30)).kind == (
        "step-budget-hit"
    )


def test_bind_inputs():
    ir = ir_of("int f(int a, int b) { return a; }")
    assert bind_inputs(ir, [1, 2]) == {"a": 1, "b": 2}
    assert bind_inputs(ir, {"b": 2, "a": 1}) == {"a": 1, "b": 2}


def test_classification_round_trip(foo_ir):
    c = classify_input(foo_ir, [-2])
    assert Classification.from_dict(c.to_dict()) == c
    assert c.diverges
