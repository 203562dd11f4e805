import pytest

from shadowdiff import subjects
from shadowdiff.differ import exec_concrete_version
from shadowdiff.frontend import compile_to_ir, count_changes, format_program, parse_program
from shadowdiff.mutator import (
    MutationError,
    MutationSpec,
    apply_mutation,
    generate_mutants,
    project,
    unify_versions,
)

SRC = "int f(int x, int y) { int z = x + y; if (x < y) { z = z * 2; } assert(z != 7); return z; }"


@pytest.fixture
def base():
    return parse_program(SRC)


def test_counts_and_order(base):
    specs = generate_mutants(base)
    # 2 relational x 5, 2 arithmetic x 4, 1 assignment + 1 assert
    assert len(specs) == 20
    assert [s.operator for s in specs] == ["ROR"] * 10 + ["AOR"] * 8 + ["STD"] * 2
    assert [s.replacement for s in specs[:5]] == ["<=", ">", ">=", "==", "!="]
    assert [s.replacement for s in specs[10:14]] == ["-", "*", "/", "%"]
    assert generate_mutants(base, ["STD"]) == specs[-2:]
    assert generate_mutants(base, limit=3) == specs[:3]


def test_unknown_operator(base):
    with pytest.raises(ValueError):
        generate_mutants(base, ["XYZ"])


def test_unified_program_has_one_change(base):
    for spec in generate_mutants(base):
        unified = unify_versions(base, spec)
        assert count_changes(unified) == 1


@pytest.mark.parametrize("name", subjects.BASE_PROGRAMS)
def test_projection_identities(name):
    base = parse_program(subjects.source(name))
    for spec in generate_mutants(base, ["ROR", "AOR"]):
        unified = unify_versions(base, spec)
        assert format_program(project(unified, "old")) == format_program(base)
        assert format_program(project(unified, "new")) == format_program(apply_mutation(base, spec))


def test_std_projection_behaves_like_deletion(base):
    spec = generate_mutants(base, ["STD"])[1]
    unified = compile_to_ir(unify_versions(base, spec))
    deleted = compile_to_ir(apply_mutation(base, spec))
    for x in range(-4, 5):
        for y in range(-4, 5):
            env = {"x": x, "y": y}
            a = exec_concrete_version(unified, "new", env)
            b = exec_concrete_version(deleted, "new", env)
            assert (a.kind, a.value) == (b.kind, b.value)


def test_mismatched_spec_is_rejected(base):
    spec = generate_mutants(base)[0]
    wrong = MutationSpec("ROR", spec.span, ">", "<")
    with pytest.raises(MutationError):
        unify_versions(base, wrong)


def test_overlapping_specs_are_rejected(base):
    a, b = generate_mutants(base)[:2]
    with pytest.raises(MutationError):
        unify_versions(base, [a, b])


def test_combined_mutation(base):
    specs = generate_mutants(base)
    unified = unify_versions(base, [specs[0], specs[10]])
    assert count_changes(unified) == 2


def test_spec_round_trip(base):
    for spec in generate_mutants(base):
        assert MutationSpec.from_dict(spec.to_dict()) == spec


def test_existing_changes_are_not_mutated():
    foo = parse_program(subjects.source("foo"))
    texts = [s.describe() for s in generate_mutants(foo)]
    assert not any(t.startswith("STD delete assignment at 9:") for t in texts)


def test_project_rejects_bad_version(base):
    with pytest.raises(ValueError):
        project(base, "middle")
