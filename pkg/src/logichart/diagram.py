"""Diagram construction and layout.

A diagram is the static clause-structure tree of one program+query pair:
the root (a synthetic prolog_program head) lines up horizontally with the
query goals, every user goal stacks its matching clause alternatives
vertically below itself, and every clause head lines up horizontally with
its body goals. Expansion stops at recursion: a goal whose predicate
indicator already occurs in a clause head on its own ancestor path becomes
a RecursiveGoal leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .database import Program
from .engine import (
    Address,
    BUILTIN_INDICATORS,
    ROOT_ADDRESS,
    TraceEvent,
    address_to_json,
    unify,
)
from .terms import Term, format_term, indicator, shift_vars

ROOT_LABEL = "prolog_program"

NODE_KINDS = ("Root", "ClauseHead", "UserGoal", "BuiltinGoal", "RecursiveGoal")


@dataclass(frozen=True, slots=True)
class LayoutConstants:
    gap_x: int = 20
    gap_y: int = 12
    root_x: int = 10
    root_y: int = 10
    char_width: int = 8
    padding: int = 8
    box_height: int = 24

    def to_json(self) -> dict[str, int]:
        return {
            "gap_x": self.gap_x,
            "gap_y": self.gap_y,
            "root_x": self.root_x,
            "root_y": self.root_y,
            "char_width": self.char_width,
            "padding": self.padding,
            "box_height": self.box_height,
        }


@dataclass(slots=True)
class DiagramNode:
    address: Address
    kind: str
    label: str
    goal: Term | None = None
    clause_id: int | None = None
    retracted: bool = False
    ancestors: frozenset[tuple[str, int]] = frozenset()
    h_children: list[Address] = field(default_factory=list)
    v_children: list[Address] = field(default_factory=list)
    x: int = 0
    y: int = 0
    w: int = 0
    h: int = 0

    def to_json(self) -> dict:
        return {
            "address": address_to_json(self.address),
            "kind": self.kind,
            "label": self.label,
            "x": self.x,
            "y": self.y,
            "w": self.w,
            "h": self.h,
            "retracted": self.retracted,
        }


def _address_sort_key(addr: Address) -> tuple:
    return tuple((0, v) if k == "body" else (1, v) for k, v in addr)


@dataclass(slots=True)
class Diagram:
    constants: LayoutConstants
    nodes: dict[Address, DiagramNode] = field(default_factory=dict)

    @property
    def root(self) -> DiagramNode:
        return self.nodes[ROOT_ADDRESS]

    def sorted_nodes(self) -> list[DiagramNode]:
        return [
            self.nodes[a] for a in sorted(self.nodes, key=_address_sort_key)
        ]

    def resolve_address(self, addr: Address) -> Address:
        """Deepest existing prefix of addr (clamp target for runtime events)."""
        while addr and addr not in self.nodes:
            addr = addr[:-1]
        return addr

    def to_json(self) -> dict:
        return {
            "root": address_to_json(ROOT_ADDRESS),
            "constants": self.constants.to_json(),
            "nodes": [n.to_json() for n in self.sorted_nodes()],
        }


@dataclass(slots=True)
class DiagramPatch:
    added: list[dict] = field(default_factory=list)
    crossed: list[list] = field(default_factory=list)
    moved: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"added": self.added, "crossed": self.crossed, "moved": self.moved}


# ====== BUILD ======


def _unifiable(a: Term, b: Term) -> bool:
    return unify(a, b, {}) is not None


def _expand_goal(
    d: Diagram,
    program: Program,
    goal: Term,
    addr: Address,
    ancestors: frozenset[tuple[str, int]],
) -> None:
    """Create the node for one goal and, for user goals, its alternatives."""
    ind = indicator_of(goal)
    label = format_term(goal, quoting=True)
    if ind is not None and ind in BUILTIN_INDICATORS:
        d.nodes[addr] = DiagramNode(addr, "BuiltinGoal", label, goal=goal, ancestors=ancestors)
        return
    if ind is not None and ind in ancestors:
        d.nodes[addr] = DiagramNode(addr, "RecursiveGoal", label, goal=goal, ancestors=ancestors)
        return
    node = DiagramNode(addr, "UserGoal", label, goal=goal, ancestors=ancestors)
    d.nodes[addr] = node
    if ind is None:
        return
    for cid in program.predicate_ids(ind):
        clause = program.by_id[cid]
        if not _unifiable(goal, clause.head):
            continue
        _expand_clause(d, program, addr, cid, ancestors | {ind})
        node.v_children.append(addr + (("alt", cid),))


def _expand_clause(
    d: Diagram,
    program: Program,
    goal_addr: Address,
    cid: int,
    ancestors: frozenset[tuple[str, int]],
) -> None:
    clause = program.by_id[cid]
    addr = goal_addr + (("alt", cid),)
    head_node = DiagramNode(
        addr,
        "ClauseHead",
        format_term(clause.head, quoting=True),
        goal=clause.head,
        clause_id=cid,
        retracted=clause.retracted,
        ancestors=ancestors,
    )
    d.nodes[addr] = head_node
    for i, g in enumerate(clause.body):
        child = addr + (("body", i),)
        _expand_goal(d, program, g, child, ancestors)
        head_node.h_children.append(child)


def build_diagram(
    program: Program, query: list[Term], constants: LayoutConstants | None = None
) -> Diagram:
    """Static diagram for program+query, laid out and ready to render.
    Query variables are shifted exactly as create_machine shifts them, so
    machine event addresses and diagram addresses coincide."""
    d = Diagram(constants or LayoutConstants())
    root = DiagramNode(ROOT_ADDRESS, "Root", ROOT_LABEL)
    d.nodes[ROOT_ADDRESS] = root
    shifted = shift_vars(query, program.var_counter)
    for i, goal in enumerate(shifted):
        addr: Address = (("body", i),)
        _expand_goal(d, program, goal, addr, frozenset())
        root.h_children.append(addr)
    layout(d)
    return d


# ====== LAYOUT ======


def _box_width(d: Diagram, node: DiagramNode) -> int:
    c = d.constants
    return len(node.label) * c.char_width + 2 * c.padding


def _subtree_width(d: Diagram, node: DiagramNode) -> int:
    own = _box_width(d, node)
    if node.kind in ("Root", "ClauseHead"):
        w = own
        for a in node.h_children:
            w += d.constants.gap_x + _subtree_width(d, d.nodes[a])
        return w
    if node.kind == "UserGoal" and node.v_children:
        return max(own, max(_subtree_width(d, d.nodes[a]) for a in node.v_children))
    return own


def _subtree_depth(d: Diagram, node: DiagramNode) -> int:
    c = d.constants
    if node.kind in ("Root", "ClauseHead"):
        depth = c.box_height
        for a in node.h_children:
            depth = max(depth, _subtree_depth(d, d.nodes[a]))
        return depth
    if node.kind == "UserGoal" and node.v_children:
        depth = c.box_height
        for a in node.v_children:
            depth += c.gap_y + _subtree_depth(d, d.nodes[a])
        return depth
    return c.box_height


def _place(d: Diagram, node: DiagramNode, x: int, y: int) -> None:
    c = d.constants
    node.x = x
    node.y = y
    node.w = _box_width(d, node)
    node.h = c.box_height
    if node.kind in ("Root", "ClauseHead"):
        cursor = x + node.w + c.gap_x
        for a in node.h_children:
            child = d.nodes[a]
            _place(d, child, cursor, y)
            cursor += _subtree_width(d, child) + c.gap_x
    elif node.kind == "UserGoal":
        vy = y + c.box_height + c.gap_y
        for a in node.v_children:
            child = d.nodes[a]
            _place(d, child, x, vy)
            vy += _subtree_depth(d, child) + c.gap_y


def layout(d: Diagram) -> Diagram:
    """Assign x/y/w/h per the semantic rules: the root sits at
    (root_x, root_y); each horizontal sibling starts one gap_x after the
    previous sibling's subtree; each vertical alternative starts one gap_y
    below the previous alternative's subtree."""
    _place(d, d.root, d.constants.root_x, d.constants.root_y)
    return d


# ====== PATCH ======


def apply_patch(d: Diagram, event: TraceEvent, program: Program) -> DiagramPatch:
    """Update the diagram for a database-change event and describe the change.

    Assert events insert an expanded ClauseHead subtree under every user goal
    whose static goal term unifies with the new clause head, then relayout.
    Retract events cross out the clause's heads; geometry is unchanged."""
    patch = DiagramPatch()
    if event.kind == "DbRetract":
        for node in d.sorted_nodes():
            if node.kind == "ClauseHead" and node.clause_id == event.clause_id:
                node.retracted = True
                patch.crossed.append(address_to_json(node.address))
        return patch
    if event.kind not in ("DbAssertA", "DbAssertZ"):
        raise ValueError(f"not a database event: {event.kind}")
    clause = program.by_id[event.clause_id]
    ind = indicator(clause.head)
    before = {a: (n.x, n.y) for a, n in d.nodes.items()}
    targets = [
        n
        for n in d.sorted_nodes()
        if n.kind == "UserGoal"
        and n.goal is not None
        and indicator_of(n.goal) == ind
        and _unifiable(n.goal, clause.head)
    ]
    for node in targets:
        _expand_clause(d, program, node.address, event.clause_id, node.ancestors | {ind})
        alt_addr = node.address + (("alt", event.clause_id),)
        if event.kind == "DbAssertA":
            node.v_children.insert(0, alt_addr)
        else:
            node.v_children.append(alt_addr)
    layout(d)
    for addr in sorted(d.nodes, key=_address_sort_key):
        node = d.nodes[addr]
        if addr not in before:
            patch.added.append(node.to_json())
        elif before[addr] != (node.x, node.y):
            patch.moved.append(
                {"address": address_to_json(addr), "x": node.x, "y": node.y}
            )
    return patch


def indicator_of(t: Term) -> tuple[str, int] | None:
    try:
        return indicator(t)
    except TypeError:
        return None
