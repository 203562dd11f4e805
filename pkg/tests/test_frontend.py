import random

import pytest

from programs import random_program
from shadowdiff import subjects
from shadowdiff.differ import bind_inputs, exec_concrete_version
from shadowdiff.frontend import (
    CompilerError,
    FrontendError,
    Op,
    check_stack,
    compile_to_ir,
    count_changes,
    evaluate,
    format_program,
    parse_program,
)


@pytest.mark.parametrize(
    "source, message",
    [
        ("int f(int x){ return change(x); }", "change expects 2 arguments"),
        ("int f(int x){ return change(x, 1, 2); }", "change expects 2 arguments"),
        ("int f(int x){ return change(x, change(x, 1)); }", "cannot be nested"),
        ("int f(int x){ return y; }", "undeclared variable 'y'"),
        ("int f(int x){ int y = 1 # 2; return y; }", "unexpected character"),
        ("int f(int x){ if (x) { return 1; } return 0; }", "expected bool"),
        ("int f(int x){ x = 3000000000; return x; }", "out of 32-bit range"),
        ("int f(int x) { return x; } int g(int y) { return y; }", "choose an entry"),
    ],
)
def test_parse_errors(source, message):
    with pytest.raises(FrontendError) as info:
        parse_program(source)
    assert message in info.value.format()
    assert info.value.format().startswith("<input>:1:")


def test_entry_selection():
    src = "int f(int x) { return x; } int g(int y) { return y + 1; }"
    assert parse_program(src, entry="g").entry == "g"
    with pytest.raises(FrontendError):
        parse_program(src, entry="h")


@pytest.mark.parametrize("name", subjects.NAMES)
def test_subjects_compile(name):
    ir = compile_to_ir(parse_program(subjects.source(name)))
    check_stack(ir)
    assert ir.code[-1].op is Op.HALT
    assert ir.has_change == (name == "foo")


def test_foo_sites_follow_source_lines():
    ir = compile_to_ir(parse_program(subjects.source("foo")))
    lines = [(s.kind, s.span.line) for s in ir.sites]
    assert lines == [("branch", 3), ("branch", 10), ("branch", 13), ("branch", 13), ("branch", 14), ("assert", 14)]
    assert count_changes(parse_program(subjects.source("foo"))) == 1


def test_compilation_is_deterministic():
    src = subjects.source("bank_account")
    assert compile_to_ir(parse_program(src)).listing() == compile_to_ir(parse_program(src)).listing()


def test_check_stack_rejects_underflow():
    ir = compile_to_ir(parse_program("int f(int x) { return x; }"))
    broken = list(ir.code)
    broken.insert(0, type(broken[0])(Op.IADD))
    with pytest.raises(CompilerError):
        check_stack(type(ir)(ir.name, ir.params, ir.slots, tuple(broken), ir.sites, ir.has_change))


def test_printer_round_trip():
    for seed in range(40):
        src = random_program(seed, changes=seed % 3)
        once = format_program(parse_program(src))
        assert format_program(parse_program(once)) == once


def test_double_negation_compiles_like_plain_condition():
    a = compile_to_ir(parse_program("int f(int x) { if (!!(x < 3)) { return 1; } return 0; }"))
    b = compile_to_ir(parse_program("int f(int x) { if (x < 3) { return 1; } return 0; }"))
    assert [i.op for i in a.code] == [i.op for i in b.code]


@pytest.mark.parametrize("seed", range(60))
def test_ast_evaluator_agrees_with_vm(seed):
    program = parse_program(random_program(seed, params=1 + seed % 3, changes=seed % 3, division=seed % 4 == 0))
    ir = compile_to_ir(program)
    rng = random.Random(seed)
    for _ in range(8):
        args = [rng.randint(-6, 6) for _ in ir.params]
        for version in ("old", "new"):
            ast = evaluate(program, args, version)
            vm = exec_concrete_version(ir, version, bind_inputs(ir, args))
            assert (ast.kind, ast.value) == (vm.kind, vm.value)


def test_loop_bound_agrees():
    src = "int f(int n) { int i = 0; while (i < n) { i = i + 1; } return i; }"
    program = parse_program(src)
    ir = compile_to_ir(program)
    assert evaluate(program, [5], loop_bound=8).value == 5
    assert exec_concrete_version(ir, "new", {"n": 5}).value == 5
    assert evaluate(program, [50], loop_bound=8).kind == "loop-bound-hit"
    from shadowdiff.engine import EngineConfig

    assert exec_concrete_version(ir, "new", {"n": 50}, EngineConfig(loop_bound=8)).kind == "loop-bound-hit"
