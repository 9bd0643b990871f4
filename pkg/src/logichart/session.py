"""Session: one program+query execution wired to its diagram.

The session owns the machine, the diagram, the per-node visual states and
the ordered TraceEvent log. session_step advances the machine by one event
and translates it into protocol messages; replay folds the same transition
table over a log prefix, so any client can reconstruct node colors at any
point without re-running the query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .database import Program
from .diagram import Diagram, LayoutConstants, apply_patch, build_diagram
from .engine import (
    AWAITING,
    Address,
    DONE,
    Machine,
    MachineError,
    TraceEvent,
    address_to_json,
    create_machine,
)
from .terms import Term

VISUAL_STATES = ("Untouched", "Called", "Succeeded", "Failed", "Pruned")

# Legal NodeState transitions; CutPrune moves any state to Pruned.
TRANSITIONS: dict[tuple[str, str], str] = {
    ("Untouched", "Call"): "Called",
    ("Called", "Exit"): "Succeeded",
    ("Called", "Fail"): "Failed",
    ("Succeeded", "Redo"): "Called",
    ("Failed", "Redo"): "Called",
}

ONE_STEP = "OneStep"
AUTOMATIC = "Automatic"


@dataclass(slots=True)
class Session:
    program: Program
    query: list[Term]
    constants: LayoutConstants
    machine: Machine
    diagram: Diagram
    states: dict[Address, str] = field(default_factory=dict)
    log: list[TraceEvent] = field(default_factory=list)
    mode: str = ONE_STEP
    step_budget: int = 100_000

    def state_of(self, addr: Address) -> str:
        return self.states.get(addr, "Untouched")


def create_session(
    program: Program,
    query: list[Term],
    constants: LayoutConstants | None = None,
    step_budget: int = 100_000,
) -> Session:
    constants = constants or LayoutConstants()
    return Session(
        program=program,
        query=query,
        constants=constants,
        machine=create_machine(program, query, step_budget),
        diagram=build_diagram(program, query, constants),
        step_budget=step_budget,
    )


def create_session_from_source(
    program_text: str,
    query_text: str,
    constants: LayoutConstants | None = None,
    step_budget: int = 100_000,
) -> Session:
    """Parse both sources and open a session. Parse errors propagate."""
    from .reader import parse_program, parse_query

    return create_session(
        parse_program(program_text), parse_query(query_text), constants, step_budget
    )


def reset_session(s: Session) -> None:
    s.machine = create_machine(s.program, s.query, s.step_budget)
    s.diagram = build_diagram(s.program, s.query, s.constants)
    s.states = {}
    s.log = []
    s.mode = ONE_STEP


# ====== PROTOCOL MESSAGES ======


def msg_diagram_full(s: Session) -> dict:
    out = {"kind": "DiagramFull"}
    out.update(s.diagram.to_json())
    return out


def msg_node_state(addr: Address, state: str) -> dict:
    return {"kind": "NodeState", "address": address_to_json(addr), "state": state}


def msg_done(ev: TraceEvent) -> dict:
    out = {"kind": "Done", "success": bool(ev.success), "solutions": ev.solutions or 0}
    if ev.text:
        out["text"] = ev.text
    return out


def current_state_messages(s: Session) -> list[dict]:
    """NodeState messages for every non-Untouched node (GetDiagram follow-up)."""
    out = []
    for node in s.diagram.sorted_nodes():
        state = s.state_of(node.address)
        if state != "Untouched":
            out.append(msg_node_state(node.address, state))
    return out


# ====== STEPPING ======


def _apply_node_event(s: Session, ev: TraceEvent) -> list[dict]:
    addr = ev.address
    assert addr is not None
    if addr not in s.diagram.nodes:
        raise MachineError(f"event for unknown diagram address {addr}")
    state = s.state_of(addr)
    new_state = TRANSITIONS.get((state, ev.kind))
    if new_state is None:
        raise MachineError(f"illegal transition {state} --{ev.kind}--> at {addr}")
    s.states[addr] = new_state
    return [
        msg_node_state(addr, new_state),
        {
            "kind": "Bindings",
            "address": address_to_json(addr),
            "vars": [list(p) for p in ev.bindings],
            "text": ev.text,
        },
    ]


def _dispatch(s: Session, ev: TraceEvent) -> list[dict]:
    if ev.kind in ("Call", "Exit", "Fail", "Redo"):
        return _apply_node_event(s, ev)
    if ev.kind == "CutPrune":
        out = []
        for addr in ev.pruned:
            s.states[addr] = "Pruned"
            out.append(msg_node_state(addr, "Pruned"))
        return out
    if ev.kind in ("DbAssertA", "DbAssertZ", "DbRetract"):
        patch = apply_patch(s.diagram, ev, s.machine.program)
        return [{"kind": "DiagramPatch", "patch": patch.to_json()}]
    if ev.kind == "Output":
        return [{"kind": "OutputText", "text": ev.text}]
    if ev.kind == "SolutionFound":
        return [
            {
                "kind": "Bindings",
                "address": address_to_json(ev.address or ()),
                "vars": [list(p) for p in ev.bindings],
                "text": f"solution {ev.solutions}",
            }
        ]
    if ev.kind == "PromptBacktrack":
        return [{"kind": "PromptBacktrack"}]
    if ev.kind == "QueryDone":
        return [msg_done(ev)]
    raise MachineError(f"unknown event kind {ev.kind}")


def session_step(s: Session) -> list[dict]:
    """Advance the machine one event; return the protocol messages for it."""
    ev = s.machine.step()
    s.log.append(ev)
    return _dispatch(s, ev)


def session_run(s: Session) -> list[dict]:
    """Step until the run finishes or a backtracking prompt appears."""
    s.mode = AUTOMATIC
    out: list[dict] = []
    while s.machine.status not in (DONE, AWAITING):
        out.extend(session_step(s))
    return out


def session_answer(s: Session, more: bool) -> list[dict]:
    """Answer the §-style backtracking prompt. Yes resumes (in Automatic
    mode to the next prompt or the end; in OneStep mode by a single step);
    no finishes the run with its Done message."""
    events = s.machine.answer_backtrack(more)
    out: list[dict] = []
    for ev in events:
        s.log.append(ev)
        out.extend(_dispatch(s, ev))
    if more:
        if s.mode == AUTOMATIC:
            out.extend(session_run(s))
        else:
            out.extend(session_step(s))
    return out


# ====== REPLAY ======


def replay(log: Sequence[TraceEvent], upto: int) -> dict[Address, str]:
    """Visual states after the first `upto` events of the log. Pure fold of
    the transition table; identical for identical logs, anywhere."""
    if not 0 <= upto <= len(log):
        raise IndexError(f"upto={upto} outside 0..{len(log)}")
    states: dict[Address, str] = {}
    for ev in log[:upto]:
        if ev.kind in ("Call", "Exit", "Fail", "Redo"):
            assert ev.address is not None
            prev = states.get(ev.address, "Untouched")
            nxt = TRANSITIONS.get((prev, ev.kind))
            if nxt is None:
                raise MachineError(
                    f"illegal transition {prev} --{ev.kind}--> in replay"
                )
            states[ev.address] = nxt
        elif ev.kind == "CutPrune":
            for addr in ev.pruned:
                states[addr] = "Pruned"
    return states
