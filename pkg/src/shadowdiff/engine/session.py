"""Solver access for one engine run: caching, counting, SMT-LIB dumps."""

from __future__ import annotations

import os

from ..report import TreeNode
from ..solver import DEFAULT_NODE_LIMIT, Conjunction, SolverError, SolverResult, Status, check_sat, conjunction_key, get_model, to_smtlib


class SolverSession:
    def __init__(self, inputs, node_limit: int = DEFAULT_NODE_LIMIT, emit_smt: str | None = None):
        self.inputs = tuple(inputs)
        self.node_limit = node_limit
        self.emit_smt = emit_smt
        self.queries = 0
        self.cache_hits = 0
        self.warnings: list[str] = []
        self.nodes: list[TreeNode] = []
        self._results: dict[str, SolverResult] = {}
        self._models: dict[str, dict[str, int]] = {}
        if emit_smt:
            os.makedirs(emit_smt, exist_ok=True)

    def _conj(self, constraints) -> Conjunction:
        return Conjunction.of(constraints, self.inputs)

    def check(self, constraints) -> SolverResult:
        conj = self._conj(constraints)
        key = conjunction_key(conj)
        cached = self._results.get(key)
        if cached is not None:
            self.cache_hits += 1
            return cached
        self.queries += 1
        if self.emit_smt:
            path = os.path.join(self.emit_smt, f"query_{self.queries:05d}.smt2")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(to_smtlib(conj))
        result = check_sat(conj, self.node_limit)
        if result.status is Status.UNKNOWN:
            self.warnings.append(f"solver returned unknown ({result.reason}) for {conj.render()}")
        self._results[key] = result
        return result

    def model(self, constraints) -> dict[str, int] | None:
        conj = self._conj(constraints)
        key = conjunction_key(conj)
        if key in self._models:
            return dict(self._models[key])
        try:
            model = get_model(conj, self.node_limit)
        except SolverError as exc:
            self.warnings.append(f"no model for {conj.render()}: {exc}")
            return None
        self._models[key] = model
        return dict(model)

    def node(self, parent, edge, site, pc, status, note="") -> int:
        old, new = pc.render()
        node = TreeNode(len(self.nodes), parent, edge, site, old, new, status, note)
        self.nodes.append(node)
        return node.id
