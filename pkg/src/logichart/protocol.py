"""Wire protocol: request dispatch and length-delimited stdio framing.

Every request produces at least one response message. The same dispatcher
backs the stdio pipe mode and the WebSocket endpoint; only the framing
differs (length-prefixed frames on stdio, one message per text frame on
WebSocket).
"""

from __future__ import annotations

import json
from typing import BinaryIO

from .database import Program
from .diagram import LayoutConstants, build_diagram
from .engine import AWAITING, MachineError
from .reader import ParseError, parse_program, parse_query
from .session import (
    Session,
    create_session,
    current_state_messages,
    msg_diagram_full,
    reset_session,
    session_answer,
    session_run,
    session_step,
)

REQUEST_KINDS = (
    "LoadProgram",
    "SetQuery",
    "Step",
    "Run",
    "AnswerBacktrack",
    "GetDiagram",
    "Reset",
)


def msg_error(message: str) -> dict:
    return {"kind": "Error", "message": message}


class SessionHost:
    """One client's state: loaded program, query, and the live session."""

    def __init__(self, constants: LayoutConstants | None = None, step_budget: int = 100_000):
        self.constants = constants or LayoutConstants()
        self.step_budget = step_budget
        self.program: Program | None = None
        self.program_text: str | None = None
        self.query_text: str | None = None
        self.session: Session | None = None

    # --- request handlers

    def _load_program(self, req: dict) -> list[dict]:
        text = req.get("text", "")
        self.program = parse_program(text)
        self.program_text = text
        if self.query_text is not None:
            return self._set_query({"text": self.query_text})
        # no query yet: acknowledge with the root-only diagram
        d = build_diagram(self.program, [], self.constants)
        out = {"kind": "DiagramFull"}
        out.update(d.to_json())
        return [out]

    def _set_query(self, req: dict) -> list[dict]:
        if self.program is None:
            return [msg_error("no program loaded")]
        text = req.get("text", "")
        query = parse_query(text)
        self.query_text = text
        self.session = create_session(
            self.program, query, self.constants, self.step_budget
        )
        return [msg_diagram_full(self.session)]

    def _require_session(self) -> Session:
        if self.session is None:
            raise MachineError("no session: load a program and set a query first")
        return self.session

    def handle(self, req: dict) -> list[dict]:
        """Dispatch one request; always returns at least one response."""
        kind = req.get("kind")
        try:
            if kind == "LoadProgram":
                return self._load_program(req)
            if kind == "SetQuery":
                return self._set_query(req)
            if kind == "Step":
                return session_step(self._require_session())
            if kind == "Run":
                return session_run(self._require_session())
            if kind == "AnswerBacktrack":
                s = self._require_session()
                if s.machine.status != AWAITING:
                    return [msg_error("no backtracking prompt to answer")]
                return session_answer(s, bool(req.get("success")))
            if kind == "GetDiagram":
                s = self._require_session()
                return [msg_diagram_full(s)] + current_state_messages(s)
            if kind == "Reset":
                s = self._require_session()
                reset_session(s)
                return [msg_diagram_full(s)]
            return [msg_error(f"unknown request kind {kind!r}")]
        except ParseError as e:
            return [msg_error(f"parse error: {e}")]
        except MachineError as e:
            return [msg_error(str(e))]


# ====== STDIO FRAMING ======

# A frame is the payload's UTF-8 byte length in decimal ASCII, a newline,
# then the payload. Lengths keep the stream unambiguous without depending
# on line discipline inside the JSON.


def write_frame(stream: BinaryIO, message: dict) -> None:
    payload = json.dumps(message, separators=(",", ":")).encode("utf-8")
    stream.write(str(len(payload)).encode("ascii") + b"\n" + payload)
    stream.flush()


def read_frame(stream: BinaryIO) -> dict | None:
    """Read one frame; None on clean EOF. Raises ValueError on a bad header."""
    header = b""
    while True:
        ch = stream.read(1)
        if not ch:
            if header:
                raise ValueError("truncated frame header")
            return None
        if ch == b"\n":
            break
        header += ch
    if not header.isdigit():
        raise ValueError(f"bad frame header {header!r}")
    length = int(header)
    payload = b""
    while len(payload) < length:
        chunk = stream.read(length - len(payload))
        if not chunk:
            raise ValueError("truncated frame payload")
        payload += chunk
    return json.loads(payload.decode("utf-8"))


def serve_pipe(stdin: BinaryIO, stdout: BinaryIO, host: SessionHost | None = None) -> None:
    """Run the request loop over length-delimited stdio frames until EOF."""
    host = host or SessionHost()
    while True:
        try:
            req = read_frame(stdin)
        except ValueError as e:
            write_frame(stdout, msg_error(str(e)))
            return
        if req is None:
            return
        if not isinstance(req, dict):
            write_frame(stdout, msg_error("request must be a JSON object"))
            continue
        for msg in host.handle(req):
            write_frame(stdout, msg)
