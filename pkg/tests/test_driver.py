import json

import pytest

from shadowdiff import subjects
from shadowdiff.driver import compare, emit_dot, format_table, load_report, main
from shadowdiff.driver.compare import rows_from_json, rows_to_json
from shadowdiff.engine import EngineConfig, run_plain, run_shadow
from shadowdiff.frontend import compile_to_ir, parse_program
from shadowdiff.mutator import unify_versions, generate_mutants

FOO = str(subjects.path("foo.sl"))
FOO_TESTS = str(subjects.path("foo_tests.json"))


def test_run_shadow_exit_and_report(tmp_path, capsys):
    out, dot = tmp_path / "r.json", tmp_path / "t.dot"
    code = main(["run", "--program", FOO, "--tests", FOO_TESTS, "--out", str(out), "--dot", str(dot)])
    assert code == 10
    report = load_report(out.read_text())
    assert report.mode == "shadow" and report.counters.diff_paths == 2
    assert dot.read_text().startswith("digraph shadow {")
    assert "2 diff paths" in capsys.readouterr().out


def test_run_plain_modes(tmp_path):
    out = tmp_path / "p.json"
    assert main(["run", "--program", FOO, "--mode", "plain-new", "--out", str(out)]) == 10
    report = load_report(out.read_text())
    assert report.mode == "plain-new" and report.counters.paths == 4


def test_no_diffs_exit_zero(tmp_path):
    tests = tmp_path / "t.json"
    tests.write_text(json.dumps({"tests": [{"args": [1, 2]}]}))
    prog = str(subjects.path("nochange.sl"))
    assert main(["run", "--program", prog, "--tests", str(tests)]) == 0
    assert main(["run", "--program", prog, "--mode", "plain-old"]) == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["run"],
        ["run", "--program", "/nonexistent.sl", "--tests", FOO_TESTS],
        ["run", "--program", FOO],
        ["run", "--program", FOO, "--mode", "sideways"],
        ["compare", "--program", FOO, "--tests", FOO_TESTS, "--operators", "ROR,XYZ"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.sl"
    bad.write_text("int f(int x) { return change(x); }\n")
    assert main(["run", "--program", str(bad), "--tests", FOO_TESTS]) == 2
    assert "bad.sl:1:" in capsys.readouterr().err


def test_malformed_tests_file(tmp_path, capsys):
    tests = tmp_path / "t.json"
    tests.write_text('{"tests": [{"args": ["a"]}]}')
    assert main(["run", "--program", FOO, "--tests", str(tests)]) == 2
    tests.write_text("{not json")
    assert main(["run", "--program", FOO, "--tests", str(tests)]) == 2


def test_report_json_round_trip(foo_ir, foo_tests):
    report = run_shadow(foo_ir, foo_tests, subject="foo")
    again = load_report(report.to_json())
    assert again.to_json() == report.to_json()
    plain = run_plain(foo_ir, "old", subject="foo")
    assert load_report(plain.to_json()).to_json() == plain.to_json()


def test_report_is_reproducible(foo_ir, foo_tests):
    a = run_shadow(foo_ir, foo_tests, subject="foo").to_json()
    b = run_shadow(foo_ir, foo_tests, subject="foo").to_json()
    assert a == b
    assert json.loads(a)["schema"] == 1


def test_dot_labels(foo_ir, foo_tests):
    text = emit_dot(run_shadow(foo_ir, foo_tests, subject="foo"))
    assert "line 10: y > 1" in text
    assert 'label="diff_false"' in text
    assert "UNSAT" in text and "style=bold" in text


def test_compare_matches_run_shadow():
    base = parse_program(subjects.source("bank_withdraw"))
    tests = subjects.tests("bank_withdraw")
    rows = compare("bank_withdraw", base, ["ROR"], tests, limit=6)
    assert len(rows) == 6 and all(r.error is None for r in rows)
    for spec, row in zip(generate_mutants(base, ["ROR"], 6), rows):
        ir = compile_to_ir(unify_versions(base, spec))
        assert row.shadow_diffs == run_shadow(ir, tests).counters.diff_paths
        plain = run_plain(ir, "new")
        assert (row.plain_paths, row.plain_diffs) == (plain.counters.paths, plain.diff_count)


def test_compare_parallel_equals_serial():
    base = parse_program(subjects.source("foo_base"))
    tests = subjects.tests("foo")
    serial = compare("foo", base, ["ROR", "STD"], tests, EngineConfig(), limit=8)
    parallel = compare("foo", base, ["ROR", "STD"], tests, EngineConfig(), limit=8, jobs=2)
    assert serial == parallel
    assert rows_from_json(rows_to_json(serial)) == serial
    assert format_table(serial).splitlines()[0].startswith("mutant")


def test_compare_cli(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code = main(["compare", "--program", FOO, "--tests", FOO_TESTS, "--out", str(out)])
    assert code == 10
    (row,) = rows_from_json(out.read_text())
    assert row.type == "given" and row.shadow_diffs == 2


def test_mutate_cli(tmp_path, capsys):
    base = str(subjects.path("foo_base.sl"))
    assert main(["mutate", "--program", base, "--operators", "STD", "--out-dir", str(tmp_path)]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())["mutants"]
    assert len(manifest) == 3
    for entry in manifest:
        parse_program((tmp_path / entry["file"]).read_text())
        assert entry["file"].startswith("foo_base_std_")


def test_compare_foo_given_row_counts():
    rows = compare("foo", parse_program(subjects.source("foo")), ["ROR"], subjects.tests("foo"))
    (row,) = rows
    assert (row.plain_paths, row.plain_diffs, row.shadow_diffs) == (4, 2, 2)
