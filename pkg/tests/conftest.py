import pytest

from shadowdiff import subjects
from shadowdiff.frontend import compile_to_ir, parse_program


def load_ir(name: str):
    return compile_to_ir(parse_program(subjects.source(name)))


@pytest.fixture
def foo_ir():
    return load_ir("foo")


@pytest.fixture
def foo_tests():
    return subjects.tests("foo")


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
