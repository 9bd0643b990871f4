"""Request dispatch and stdio framing."""

from __future__ import annotations

import io
import json

import pytest

from logichart.protocol import SessionHost, read_frame, serve_pipe, write_frame

from tutil import CUT, DYNADD, LISTS


def _host():
    return SessionHost()


def _load(host, program=LISTS, query="?- test(X,Y,Z)."):
    host.handle({"kind": "LoadProgram", "text": program})
    return host.handle({"kind": "SetQuery", "text": query})


# ====== DISPATCH ======


def test_load_program_alone_acks_with_root_diagram():
    msgs = _host().handle({"kind": "LoadProgram", "text": LISTS})
    assert len(msgs) == 1
    assert msgs[0]["kind"] == "DiagramFull"
    assert [n["kind"] for n in msgs[0]["nodes"]] == ["Root"]


def test_set_query_returns_the_full_diagram():
    host = _host()
    msgs = _load(host)
    assert msgs[0]["kind"] == "DiagramFull"
    assert len(msgs[0]["nodes"]) == 12


def test_set_query_before_load_is_an_error():
    msgs = _host().handle({"kind": "SetQuery", "text": "?- f."})
    assert msgs == [{"kind": "Error", "message": "no program loaded"}]


def test_parse_error_reports_location_and_keeps_host_alive():
    host = _host()
    msgs = host.handle({"kind": "LoadProgram", "text": "f :- (g.\n"})
    assert msgs[0]["kind"] == "Error"
    assert "parse error" in msgs[0]["message"]
    assert "line 1" in msgs[0]["message"]
    # host still usable afterwards
    assert _load(host)[0]["kind"] == "DiagramFull"


def test_reload_program_with_query_set_restarts_the_session():
    host = _host()
    _load(host, CUT, "?- f.")
    host.handle({"kind": "Run"})
    msgs = host.handle({"kind": "LoadProgram", "text": CUT})
    assert msgs[0]["kind"] == "DiagramFull"
    assert host.session.machine.status == "Running"
    assert host.session.log == []


def test_step_and_run_flow():
    host = _host()
    _load(host, CUT, "?- f.")
    first = host.handle({"kind": "Step"})
    assert first[0] == {"kind": "NodeState", "address": [{"body": 0}], "state": "Called"}
    rest = host.handle({"kind": "Run"})
    assert rest[-1] == {"kind": "Done", "success": False, "solutions": 0}


def test_step_without_session_is_an_error():
    msgs = _host().handle({"kind": "Step"})
    assert msgs[0]["kind"] == "Error"


def test_answer_backtrack_protocol():
    host = _host()
    _load(host)
    msgs = host.handle({"kind": "Run"})
    assert msgs[-1]["kind"] == "PromptBacktrack"
    done = host.handle({"kind": "AnswerBacktrack", "success": False})
    assert done == [{"kind": "Done", "success": True, "solutions": 1}]


def test_answer_without_prompt_is_an_error():
    host = _host()
    _load(host, CUT, "?- f.")
    msgs = host.handle({"kind": "AnswerBacktrack", "success": True})
    assert msgs == [{"kind": "Error", "message": "no backtracking prompt to answer"}]


def test_get_diagram_returns_full_state():
    host = _host()
    _load(host, CUT, "?- f.")
    host.handle({"kind": "Run"})
    msgs = host.handle({"kind": "GetDiagram"})
    assert msgs[0]["kind"] == "DiagramFull"
    node_states = [m for m in msgs[1:] if m["kind"] == "NodeState"]
    assert node_states  # every touched node is restated
    states = {json.dumps(m["address"]): m["state"] for m in node_states}
    live = {
        json.dumps([dict([seg]) for seg in addr]): st
        for addr, st in host.session.states.items()
    }
    assert states == live


def test_reset_returns_an_untouched_diagram():
    host = _host()
    _load(host, DYNADD, "?- f.")
    host.handle({"kind": "Run"})
    grown = host.handle({"kind": "GetDiagram"})[0]["nodes"]
    msgs = host.handle({"kind": "Reset"})
    assert msgs[0]["kind"] == "DiagramFull"
    # the assertz expansion is gone: back to the as-written program
    fresh = _fresh_nodes(DYNADD, "?- f.")
    assert len(msgs[0]["nodes"]) == len(fresh) < len(grown)
    assert host.session.states == {}


def _fresh_nodes(src, query):
    h = _host()
    _load(h, src, query)
    return h.handle({"kind": "GetDiagram"})[0]["nodes"]


def test_unknown_kind_is_an_error():
    msgs = _host().handle({"kind": "Teleport"})
    assert msgs[0]["kind"] == "Error"
    assert "Teleport" in msgs[0]["message"]


def test_every_request_gets_at_least_one_response():
    host = _host()
    reqs = [
        {"kind": "LoadProgram", "text": LISTS},
        {"kind": "SetQuery", "text": "?- test(X,Y,Z)."},
        {"kind": "Step"},
        {"kind": "Run"},
        {"kind": "AnswerBacktrack", "success": True},
        {"kind": "GetDiagram"},
        {"kind": "Reset"},
        {"kind": "Nonsense"},
        {},
    ]
    for req in reqs:
        assert len(host.handle(req)) >= 1, req


def test_closed_field_vocabulary():
    # every message field name comes from the wire-protocol field set
    allowed = {
        "kind", "address", "state", "patch", "vars", "text",
        "success", "solutions", "message", "nodes", "root", "constants",
    }
    host = _host()
    msgs = []
    msgs += host.handle({"kind": "LoadProgram", "text": DYNADD})
    msgs += host.handle({"kind": "SetQuery", "text": "?- f."})
    msgs += host.handle({"kind": "Run"})
    msgs += host.handle({"kind": "GetDiagram"})
    for m in msgs:
        assert set(m) <= allowed, m


# ====== FRAMING ======


def test_frame_round_trip():
    buf = io.BytesIO()
    write_frame(buf, {"kind": "Step"})
    write_frame(buf, {"kind": "SetQuery", "text": "?- fé."})
    buf.seek(0)
    assert read_frame(buf) == {"kind": "Step"}
    assert read_frame(buf) == {"kind": "SetQuery", "text": "?- fé."}
    assert read_frame(buf) is None


def test_frame_format_is_length_newline_payload():
    buf = io.BytesIO()
    write_frame(buf, {"kind": "Step"})
    raw = buf.getvalue()
    payload = json.dumps({"kind": "Step"}, separators=(",", ":")).encode()
    assert raw == str(len(payload)).encode() + b"\n" + payload


def test_truncated_payload_raises():
    buf = io.BytesIO(b"50\n{\"kind\":\"Step\"}")
    with pytest.raises(ValueError):
        read_frame(buf)


def test_bad_header_raises():
    with pytest.raises(ValueError):
        read_frame(io.BytesIO(b"abc\n{}"))
    with pytest.raises(ValueError):
        read_frame(io.BytesIO(b"12"))


def test_serve_pipe_end_to_end():
    inbuf = io.BytesIO()
    for req in [
        {"kind": "LoadProgram", "text": CUT},
        {"kind": "SetQuery", "text": "?- f."},
        {"kind": "Run"},
    ]:
        write_frame(inbuf, req)
    inbuf.seek(0)
    outbuf = io.BytesIO()
    serve_pipe(inbuf, outbuf, SessionHost())
    outbuf.seek(0)
    msgs = []
    while (m := read_frame(outbuf)) is not None:
        msgs.append(m)
    assert msgs[0]["kind"] == "DiagramFull"  # LoadProgram ack
    assert msgs[1]["kind"] == "DiagramFull"  # SetQuery
    assert msgs[-1] == {"kind": "Done", "success": False, "solutions": 0}
    out = "".join(m["text"] for m in msgs if m["kind"] == "OutputText")
    assert out == "a\n"


def test_serve_pipe_rejects_non_object_requests():
    inbuf = io.BytesIO()
    write_frame(inbuf, ["not", "a", "dict"])
    write_frame(inbuf, {"kind": "LoadProgram", "text": "a.\n"})
    inbuf.seek(0)
    outbuf = io.BytesIO()
    serve_pipe(inbuf, outbuf, SessionHost())
    outbuf.seek(0)
    first = read_frame(outbuf)
    assert first["kind"] == "Error"
    second = read_frame(outbuf)
    assert second["kind"] == "DiagramFull"
