"""logichart: run Prolog queries and watch them as live clause-tree diagrams.

The package parses a small standard Prolog dialect, executes queries on an
explicit-step resolution machine that emits one trace event per step, lays
the program out as a Logichart diagram (goals left to right, alternatives
top to bottom), and renders it to SVG or streams it to clients over a JSON
protocol (stdio frames or WebSocket).
"""

from .database import Clause, Program
from .diagram import (
    Diagram,
    DiagramNode,
    DiagramPatch,
    LayoutConstants,
    apply_patch,
    build_diagram,
)
from .engine import (
    Address,
    Machine,
    MachineError,
    PrologError,
    TraceEvent,
    address_from_json,
    address_to_json,
    create_machine,
    run_to_completion,
    unify,
)
from .reader import ParseError, parse_program, parse_query, parse_term
from .session import (
    Session,
    create_session,
    create_session_from_source,
    replay,
    reset_session,
    session_answer,
    session_run,
    session_step,
)
from .svgrender import render_svg
from .terms import Atom, Int, Struct, Term, Var, alpha_equivalent, format_term

__version__ = "0.1.0"

__all__ = [
    "Address",
    "Atom",
    "Clause",
    "Diagram",
    "DiagramNode",
    "DiagramPatch",
    "Int",
    "LayoutConstants",
    "Machine",
    "MachineError",
    "ParseError",
    "Program",
    "PrologError",
    "Session",
    "Struct",
    "Term",
    "TraceEvent",
    "Var",
    "address_from_json",
    "address_to_json",
    "alpha_equivalent",
    "apply_patch",
    "build_diagram",
    "create_machine",
    "create_session",
    "create_session_from_source",
    "format_term",
    "parse_program",
    "parse_query",
    "parse_term",
    "render_svg",
    "replay",
    "reset_session",
    "run_to_completion",
    "session_answer",
    "session_run",
    "session_step",
    "unify",
    "__version__",
]
