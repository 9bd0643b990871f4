"""Deterministic SVG 1.1 rendering of a diagram.

Shapes by node kind: Root and ClauseHead are rounded boxes, UserGoal a plain
box, BuiltinGoal a doubled border, RecursiveGoal a dashed border. Fills by
visual state; retracted clause heads are overdrawn with a cross. Identical
diagram+states always produce byte-identical output: all coordinates are
integers and elements are written in canonical address order.
"""

from __future__ import annotations

from typing import Mapping

from .diagram import Diagram, DiagramNode
from .engine import Address

FILL = {
    "Untouched": "#ffffff",
    "Called": "#9ee09e",
    "Succeeded": "#9ecbf5",
    "Failed": "#f5a3a3",
    "Pruned": "#cccccc",
}

STROKE = "#333333"
FONT_SIZE = 13


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _box(node: DiagramNode, fill: str) -> list[str]:
    x, y, w, h = node.x, node.y, node.w, node.h
    common = f'fill="{fill}" stroke="{STROKE}" stroke-width="1"'
    parts: list[str] = []
    if node.kind in ("Root", "ClauseHead"):
        parts.append(f'<rect x="{x}" y="{y}" width="{w}" height="{h}" rx="6" {common}/>')
    elif node.kind == "BuiltinGoal":
        parts.append(f'<rect x="{x}" y="{y}" width="{w}" height="{h}" {common}/>')
        parts.append(
            f'<rect x="{x + 3}" y="{y + 3}" width="{w - 6}" height="{h - 6}"'
            f' fill="none" stroke="{STROKE}" stroke-width="1"/>'
        )
    elif node.kind == "RecursiveGoal":
        parts.append(
            f'<rect x="{x}" y="{y}" width="{w}" height="{h}" {common}'
            f' stroke-dasharray="5,3"/>'
        )
    else:
        parts.append(f'<rect x="{x}" y="{y}" width="{w}" height="{h}" {common}/>')
    return parts


def render_svg(d: Diagram, states: Mapping[Address, str] | None = None) -> str:
    states = states or {}
    c = d.constants
    nodes = d.sorted_nodes()
    width = max(n.x + n.w for n in nodes) + c.root_x
    height = max(n.y + n.h for n in nodes) + c.root_y
    out: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}"'
        f' height="{height}" viewBox="0 0 {width} {height}">',
    ]
    # connectors first, so boxes draw over them
    for node in nodes:
        mid = c.box_height // 2
        if node.h_children:
            prev = node
            for addr in node.h_children:
                child = d.nodes[addr]
                out.append(
                    f'<line x1="{prev.x + prev.w}" y1="{prev.y + mid}"'
                    f' x2="{child.x}" y2="{child.y + mid}"'
                    f' stroke="{STROKE}" stroke-width="1"/>'
                )
                prev = child
        if node.v_children:
            last = d.nodes[node.v_children[-1]]
            out.append(
                f'<line x1="{node.x}" y1="{node.y + node.h}"'
                f' x2="{last.x}" y2="{last.y + mid}"'
                f' stroke="{STROKE}" stroke-width="1"/>'
            )
    for node in nodes:
        fill = FILL[states.get(node.address, "Untouched")]
        out.extend(_box(node, fill))
        tx = node.x + node.w // 2
        ty = node.y + node.h // 2 + 4
        out.append(
            f'<text x="{tx}" y="{ty}" font-family="monospace" font-size="{FONT_SIZE}"'
            f' text-anchor="middle" fill="#000000">{_esc(node.label)}</text>'
        )
        if node.retracted:
            out.append(
                f'<line x1="{node.x}" y1="{node.y}" x2="{node.x + node.w}"'
                f' y2="{node.y + node.h}" stroke="#aa0000" stroke-width="2"/>'
            )
            out.append(
                f'<line x1="{node.x}" y1="{node.y + node.h}" x2="{node.x + node.w}"'
                f' y2="{node.y}" stroke="#aa0000" stroke-width="2"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
