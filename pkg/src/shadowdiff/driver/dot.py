"""Graphviz rendering of the execution tree stored in a report."""

from __future__ import annotations


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def emit_dot(report) -> str:
    """DOT digraph of ``report.tree``; node ids follow tree order."""
    lines = ["digraph shadow {", "  node [shape=box, fontname=monospace];"]
    sites = {s.id: s for s in getattr(report, "sites", [])}
    for node in report.tree:
        if node.status == "ROOT":
            label = node.edge if not node.note else f"{node.edge}: {node.note}"
            lines.append(f"  n{node.id} [label={_quote(label)}, shape=ellipse];")
            continue
        where = ""
        if node.site is not None and node.site in sites:
            site = sites[node.site]
            where = f"line {site.line}: {site.text}\n"
        label = f"{where}PC_old: {node.pc_old}\nPC_new: {node.pc_new}\n{node.status}"
        if node.note:
            label += f" ({node.note})"
        color = {"SAT": "darkgreen", "UNSAT": "red"}.get(node.status, "orange")
        lines.append(f"  n{node.id} [label={_quote(label)}, color={color}];")
        if node.parent is not None:
            style = ", style=bold" if node.edge == "concrete" else ""
            lines.append(f"  n{node.parent} -> n{node.id} [label={_quote(node.edge)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
