"""Bundled example programs and their seed tests."""

from importlib import resources

NAMES = ("foo", "foo_base", "bank_deposit", "bank_withdraw", "bank_account", "triangle", "clamp_sum", "nochange")
BASE_PROGRAMS = ("foo_base", "bank_deposit", "bank_withdraw", "bank_account", "triangle", "clamp_sum")


def path(name: str):
    """Filesystem path of ``<name>.sl`` or ``<name>_tests.json``."""
    return resources.files(__name__).joinpath(name)


def source(name: str) -> str:
    return path(f"{name}.sl").read_text(encoding="utf-8")


def tests(name: str) -> list[dict]:
    import json

    base = name[: -len("_base")] if name.endswith("_base") else name
    return json.loads(path(f"{base}_tests.json").read_text(encoding="utf-8"))["tests"]
