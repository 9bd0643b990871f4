"""Command line interface.

logichart run    execute a query, emitting the protocol message log (NDJSON),
                 a final SVG, or one SVG frame per trace event
logichart serve  start the web server (health check, /session WebSocket, UI)
logichart pipe   speak the protocol over stdin/stdout with length framing

Exit codes from `run`: 0 query succeeded, 1 query failed, 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .diagram import LayoutConstants
from .engine import AWAITING, DONE, MachineError
from .reader import ParseError, parse_program, parse_query
from .session import (
    create_session,
    msg_diagram_full,
    replay,
    session_answer,
    session_step,
)
from .svgrender import render_svg

_DEFAULTS = LayoutConstants()


def _add_layout_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gap-x", type=int, default=_DEFAULTS.gap_x, help="horizontal gap between sibling boxes")
    p.add_argument("--gap-y", type=int, default=_DEFAULTS.gap_y, help="vertical gap between alternatives")
    p.add_argument("--char-width", type=int, default=_DEFAULTS.char_width, help="label character width in px")
    p.add_argument("--max-steps", type=int, default=100_000, help="abort runaway queries after this many machine steps")


def _constants(args: argparse.Namespace) -> LayoutConstants:
    return LayoutConstants(gap_x=args.gap_x, gap_y=args.gap_y, char_width=args.char_width)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logichart",
        description="Execute Prolog queries and draw them as live clause-tree diagrams.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a query against a program file")
    runp.add_argument("--program", required=True, help="path to the program source")
    runp.add_argument("--query", required=True, help="query text, with or without ?-")
    runp.add_argument(
        "--format",
        choices=("json", "svg", "svg-frames"),
        default="json",
        help="json: NDJSON message log; svg: final diagram; svg-frames: one SVG per event",
    )
    runp.add_argument("--out", help="output file (json/svg) or directory (svg-frames); default stdout")
    runp.add_argument(
        "--all-solutions",
        action="store_true",
        help="answer every backtracking prompt with yes",
    )
    runp.add_argument(
        "--mode",
        choices=("batch", "step"),
        default="batch",
        help="step streams each NDJSON line as it is produced",
    )
    _add_layout_args(runp)

    servep = sub.add_parser("serve", help="start the web server")
    servep.add_argument("--host", default="127.0.0.1")
    servep.add_argument("--port", type=int, default=None, help="default: $LOGICHART_PORT or 8000")
    servep.add_argument("--static", help="directory with the built web UI")
    _add_layout_args(servep)

    pipep = sub.add_parser("pipe", help="protocol over stdin/stdout (length-delimited frames)")
    _add_layout_args(pipep)

    return p


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        source = Path(args.program).read_text()
    except OSError as e:
        print(f"error: cannot read program: {e}", file=sys.stderr)
        return 2
    try:
        program = parse_program(source)
        query = parse_query(args.query)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    constants = _constants(args)
    s = create_session(program, query, constants, step_budget=args.max_steps)

    frames_dir: Path | None = None
    if args.format == "svg-frames":
        if not args.out:
            print("error: --format svg-frames requires --out DIRECTORY", file=sys.stderr)
            return 2
        frames_dir = Path(args.out)
        frames_dir.mkdir(parents=True, exist_ok=True)
        frames_dir.joinpath("frame-000000.svg").write_text(render_svg(s.diagram, {}))

    stream = args.format == "json" and args.mode == "step" and not args.out
    messages: list[dict] = []

    def emit(batch: list[dict]) -> None:
        messages.extend(batch)
        if stream:
            for m in batch:
                sys.stdout.write(json.dumps(m, separators=(",", ":")) + "\n")
                sys.stdout.flush()

    emit([msg_diagram_full(s)])
    rendered = 0
    try:
        while s.machine.status != DONE:
            if s.machine.status == AWAITING:
                emit(session_answer(s, args.all_solutions))
            else:
                emit(session_step(s))
            if frames_dir is not None:
                while rendered < len(s.log):
                    rendered += 1
                    states = replay(s.log, rendered)
                    frames_dir.joinpath(f"frame-{rendered:06d}.svg").write_text(
                        render_svg(s.diagram, states)
                    )
    except MachineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    success = any(m["kind"] == "Done" and m["success"] for m in messages)

    if args.format == "json" and not stream:
        text = "".join(json.dumps(m, separators=(",", ":")) + "\n" for m in messages)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    elif args.format == "svg":
        svg = render_svg(s.diagram, replay(s.log, len(s.log)))
        if args.out:
            Path(args.out).write_text(svg)
        else:
            sys.stdout.write(svg)

    return 0 if success else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get("LOGICHART_PORT", "8000"))
    app = create_app(_constants(args), args.static, step_budget=args.max_steps)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def _cmd_pipe(args: argparse.Namespace) -> int:
    from .protocol import SessionHost, serve_pipe

    host = SessionHost(_constants(args), step_budget=args.max_steps)
    serve_pipe(sys.stdin.buffer, sys.stdout.buffer, host)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "serve":
        return _cmd_serve(args)
    return _cmd_pipe(args)


if __name__ == "__main__":
    sys.exit(main())
