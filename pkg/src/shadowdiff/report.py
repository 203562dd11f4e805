"""Report data for shadow and plain runs, with a lossless JSON mapping."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class SiteInfo:
    id: int
    kind: str
    line: int
    col: int
    text: str


@dataclass
class TestSummary:
    __test__ = False  # not a pytest class

    index: int
    name: str
    args: dict[str, int]
    touched_patch: bool
    terminal: dict[str, Any]
    diverged: bool
    divergence_points: list[int] = field(default_factory=list)


@dataclass
class DivergenceSummary:
    id: int
    site: int
    line: int
    kind: str
    witness: dict[str, int]
    origin: str
    pc_old: list[str]
    pc_new: list[str]


@dataclass
class DiffPath:
    id: int
    provenance: str
    origin: str
    terminal: dict[str, Any]
    pc_old: list[str]
    pc_new: list[str]
    input: dict[str, int]
    verdict: str
    old: dict[str, Any]
    new: dict[str, Any]


@dataclass
class PlainPath:
    id: int
    terminal: dict[str, Any]
    pc: list[str]
    input: dict[str, int] | None
    verdict: str | None
    old: dict[str, Any] | None
    new: dict[str, Any] | None


@dataclass
class Counters:
    nodes: int = 0
    solver_queries: int = 0
    cache_hits: int = 0
    paths: int = 0
    diff_paths: int = 0


@dataclass
class TreeNode:
    id: int
    parent: int | None
    edge: str  # choice kind, "concrete", "true"/"false" or a root label
    site: int | None
    pc_old: str
    pc_new: str
    status: str  # SAT | UNSAT | UNKNOWN | ROOT
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "edge": self.edge,
            "site": self.site,
            "pc_old": self.pc_old,
            "pc_new": self.pc_new,
            "status": self.status,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d) -> TreeNode:
        return cls(d["id"], d["parent"], d["edge"], d["site"], d["pc_old"], d["pc_new"], d["status"], d.get("note", ""))


def _nodes(items) -> list[TreeNode]:
    return [TreeNode.from_dict(n) for n in items]


@dataclass
class ShadowReport:
    subject: str
    tool_version: str
    config: dict[str, Any]
    sites: list[SiteInfo]
    tests: list[TestSummary]
    divergence_points: list[DivergenceSummary]
    diff_paths: list[DiffPath]
    counters: Counters
    warnings: list[str]
    tree: list[TreeNode]
    mode: str = "shadow"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ShadowReport:
        return cls(
            subject=d["subject"],
            tool_version=d["tool_version"],
            config=d["config"],
            sites=[SiteInfo(**s) for s in d["sites"]],
            tests=[TestSummary(**t) for t in d["tests"]],
            divergence_points=[DivergenceSummary(**p) for p in d["divergence_points"]],
            diff_paths=[DiffPath(**p) for p in d["diff_paths"]],
            counters=Counters(**d["counters"]),
            warnings=list(d["warnings"]),
            tree=_nodes(d["tree"]),
            mode=d.get("mode", "shadow"),
        )

    @property
    def verdicts(self) -> list[str]:
        return [p.verdict for p in self.diff_paths]


@dataclass
class PlainReport:
    subject: str
    tool_version: str
    version: str
    config: dict[str, Any]
    sites: list[SiteInfo]
    paths: list[PlainPath]
    counters: Counters
    warnings: list[str]
    tree: list[TreeNode]
    mode: str = ""

    def __post_init__(self):
        if not self.mode:
            self.mode = f"plain-{self.version}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> PlainReport:
        return cls(
            subject=d["subject"],
            tool_version=d["tool_version"],
            version=d["version"],
            config=d["config"],
            sites=[SiteInfo(**s) for s in d["sites"]],
            paths=[PlainPath(**p) for p in d["paths"]],
            counters=Counters(**d["counters"]),
            warnings=list(d["warnings"]),
            tree=_nodes(d["tree"]),
            mode=d.get("mode", ""),
        )

    @property
    def diff_count(self) -> int:
        return sum(1 for p in self.paths if p.verdict not in (None, "identical"))


def load_report(text: str) -> ShadowReport | PlainReport:
    d = json.loads(text)
    if d.get("mode") == "shadow":
        return ShadowReport.from_dict(d)
    return PlainReport.from_dict(d)
