"""Acceptance suite.

One test per acceptance criterion, each ending in a single printed
[PASS]/[FAIL] line so the run log reads as a checklist:

    1. golden structure of the list-concatenation demo diagram
    2. layout algebra over 200 generated programs
    3. completeness: every generated program yields a valid diagram
    4. oracle equivalence against the reference interpreter
    5. cut trace exactness
    6. assertz patch exactness
    7. retract cross-out exactness
    8. replay determinism
    9. CLI determinism and exit codes

Geometry checks recompute every extent from placed boxes (tutil), never
from the layout engine's internals. Oracle expectations come from
tests/reference_interp.py, an independent interpreter kept deliberately
free of the engine's data structures (generators + persistent dicts
instead of an explicit machine).
"""

from __future__ import annotations

import json
import re
from collections import Counter

import pytest

from logichart import (
    build_diagram,
    create_machine,
    create_session_from_source,
    parse_program,
    parse_query,
    render_svg,
    replay,
    session_answer,
    session_run,
    session_step,
)
from logichart.cli import main as cli_main

import genprog
import tutil
from reference_interp import ref_run
from tutil import CUT, DYNADD, DYNDEL, LISTS, layout_violations


def _report(name: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, name


def _run_session(src: str, query: str, answer: bool = False):
    """Drive a session to Done answering every prompt `answer`; messages."""
    s = create_session_from_source(src, query)
    msgs = session_run(s)
    while s.machine.status == "AwaitingBacktrackAnswer":
        msgs.extend(session_answer(s, answer))
    return s, msgs


# ====== 1. GOLDEN STRUCTURE ======


def test_golden_structure_of_the_lists_demo():
    ok = True
    d = build_diagram(parse_program(LISTS), parse_query("?- test(X,Y,Z)."))
    ok &= len(d.nodes) == 12
    census = Counter(n.kind for n in d.nodes.values())
    ok &= census == {
        "Root": 1,
        "UserGoal": 2,
        "ClauseHead": 4,
        "BuiltinGoal": 4,
        "RecursiveGoal": 1,
    }
    builtins = sorted(n.label for n in d.nodes.values() if n.kind == "BuiltinGoal")
    ok &= builtins == ["nl", "nl", "write((X,Y,Z))", "write(end)"]

    # the test goal and both test clause heads share x
    goal = next(n for n in d.nodes.values() if n.label == "test(X,Y,Z)" and n.kind == "UserGoal")
    ok &= len(goal.v_children) == 2
    ok &= all(d.nodes[a].x == goal.x for a in goal.v_children)

    # each clause row shares y
    for n in d.nodes.values():
        ok &= all(d.nodes[a].y == n.y for a in n.h_children)

    _report("acceptance 1: golden 12-node structure", bool(ok))


# ====== 2 + 3. LAYOUT ALGEBRA AND COMPLETENESS OVER 200 PROGRAMS ======


@pytest.fixture(scope="module")
def corpus200():
    return genprog.corpus(200)


def test_layout_algebra_on_200_generated_programs(corpus200):
    bad = []
    for i, (src, query) in enumerate(corpus200):
        d = build_diagram(parse_program(src), parse_query(query))
        for v in layout_violations(d):
            bad.append(f"program {i}: {v}")
    if bad:
        print("\n".join(bad[:10]))
    _report("acceptance 2: layout algebra on 200 programs (0 violations)", not bad)


def test_completeness_every_program_yields_a_diagram(corpus200):
    failures = 0
    for src, query in corpus200:
        try:
            d = build_diagram(parse_program(src), parse_query(query))
            assert d.nodes and () in d.nodes
        except Exception:
            failures += 1
    _report("acceptance 3: completeness over 200 programs (0 failures)", failures == 0)


# ====== 4. ORACLE EQUIVALENCE ======


def test_oracle_equivalence_over_the_curated_corpus():
    corpus = tutil_corpus()
    assert len(corpus) >= 15
    mismatches = []
    for name, src, query in corpus:
        out, ok, sols = tutil.engine_summary(src, query, max_solutions=1)
        ref = ref_run(src, query, max_solutions=1)
        if out != ref.output or ok != ref.success or sols[:1] != ref.solutions[:1]:
            mismatches.append(
                f"{name}: engine=({out!r},{ok},{sols[:1]}) "
                f"ref=({ref.output!r},{ref.success},{ref.solutions[:1]})"
            )
    if mismatches:
        print("\n".join(mismatches))
    _report(
        f"acceptance 4: oracle equivalence on {len(corpus)} programs", not mismatches
    )


def tutil_corpus():
    from corpus_util import load_corpus

    return [(name, src, query) for name, src, query in load_corpus()]


# ====== 5. CUT TRACE ======


def test_cut_trace_exactness():
    evs = tutil.run_events(CUT, "?- f.")
    prunes = [e for e in evs if e.kind == "CutPrune"]
    ok = len(prunes) == 1
    # exactly two pruned addresses: second g alternative, second f alternative
    ok &= prunes[0].pruned == (
        (("body", 0), ("alt", 0), ("body", 0), ("alt", 3)),
        (("body", 0), ("alt", 1)),
    )
    ok &= tutil.output_of(evs) == "a\n"
    ok &= evs[-1].kind == "QueryDone" and evs[-1].success is False
    if ok:
        after = evs[evs.index(prunes[0]) :]
        for e in after:
            if e.kind == "Redo" and e.address:
                for p in prunes[0].pruned:
                    ok &= e.address[: len(p)] != p
    _report("acceptance 5: cut trace exactness", bool(ok))


# ====== 6. ASSERTZ PATCH ======


def test_assertz_patch_exactness():
    s, msgs = _run_session(DYNADD, "?- f.")
    ok = msgs[-1] == {"kind": "Done", "success": True, "solutions": 1}
    patches = [m for m in msgs if m["kind"] == "DiagramPatch"]
    ok &= len(patches) == 1
    g_goals = [
        n
        for n in s.diagram.nodes.values()
        if n.kind == "UserGoal" and n.label == "g(X)"
    ]
    ok &= len(g_goals) == 2
    for goal in g_goals:
        ok &= len(goal.v_children) == 2
        new_head = s.diagram.nodes[goal.v_children[-1]]
        ok &= new_head.label == "g(a)"
        kids = [s.diagram.nodes[a] for a in new_head.h_children]
        ok &= [(k.kind, k.label) for k in kids] == [("UserGoal", "k(a)")]
        # the k(a) child expands over k/1's clause
        ok &= [s.diagram.nodes[a].label for a in kids[0].v_children] == ["k(X)"]
    _report("acceptance 6: assertz patch exactness", bool(ok))


# ====== 7. RETRACT CROSS-OUT ======


def test_retract_cross_out_exactness():
    s, msgs = _run_session(DYNDEL, "?- f.")
    evs = s.log
    first_retract = next(i for i, e in enumerate(evs) if e.kind == "DbRetract")
    ok = evs[first_retract].clause_text == "g:-write(a)"

    # the crossed head exists and carries retracted=true
    crossed = [
        n
        for n in s.diagram.nodes.values()
        if n.kind == "ClauseHead" and n.retracted and n.label == "g"
    ]
    ok &= len(crossed) >= 2  # under both g callers

    # it renders with a cross
    svg = render_svg(s.diagram, s.states)
    ok &= svg.count('stroke="#aa0000"') >= 2

    # and is never selected by any Call/Redo after the retract
    dead = (("body", 0), ("alt", 0), ("body", 0), ("alt", 1))
    for e in evs[first_retract:]:
        if e.kind in ("Call", "Redo") and e.address:
            ok &= e.address[: len(dead)] != dead
    _report("acceptance 7: retract cross-out exactness", bool(ok))


# ====== 8. REPLAY DETERMINISM ======


def test_replay_determinism_across_the_corpus(corpus200):
    programs = [(s, q, 2_000) for s, q in corpus200[:60]]
    programs += [
        (LISTS, "?- test(X,Y,Z).", 100_000),
        (CUT, "?- f.", 100_000),
        (DYNADD, "?- f.", 100_000),
        (DYNDEL, "?- f.", 100_000),
    ]
    ok = True
    for src, query, budget in programs:
        s = create_session_from_source(src, query, step_budget=budget)
        while s.machine.status not in ("Done",):
            if s.machine.status == "AwaitingBacktrackAnswer":
                session_answer(s, False)
            else:
                session_step(s)
        live = s.states
        ok &= replay(s.log, len(s.log)) == live
        a = json.dumps(sorted((str(k), v) for k, v in replay(s.log, len(s.log)).items()))
        b = json.dumps(sorted((str(k), v) for k, v in replay(s.log, len(s.log)).items()))
        ok &= a == b
    _report("acceptance 8: replay equals live states, byte-identical twice", bool(ok))


# ====== 9. CLI DETERMINISM AND EXIT CODES ======


def test_cli_determinism_and_exit_codes(tmp_path, capsys):
    lists_pl = tmp_path / "lists.pl"
    lists_pl.write_text(LISTS)
    cut_pl = tmp_path / "cut.pl"
    cut_pl.write_text(CUT)

    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    rc_a = cli_main(
        ["run", "--program", str(lists_pl), "--query", "test(X,Y,Z).",
         "--format", "svg", "--out", str(a)]
    )
    rc_b = cli_main(
        ["run", "--program", str(lists_pl), "--query", "test(X,Y,Z).",
         "--format", "svg", "--out", str(b)]
    )
    ok = rc_a == rc_b == 0
    ok &= a.read_bytes() == b.read_bytes()

    ok &= cli_main(["run", "--program", str(cut_pl), "--query", "f."]) == 1
    ok &= (
        cli_main(["run", "--program", str(tmp_path / "ghost.pl"), "--query", "f."]) == 2
    )
    bad = tmp_path / "bad.pl"
    bad.write_text("f :-.\n")
    ok &= cli_main(["run", "--program", str(bad), "--query", "f."]) == 2
    capsys.readouterr()
    _report("acceptance 9: CLI byte-identical SVG and exit codes 0/1/2", bool(ok))


# ====== CORPUS-WIDE EVENT DISCIPLINE (supports 4, 5, 8) ======


def test_event_discipline_on_200_generated_programs(corpus200):
    """Grammar, cut scoping, and strict session transitions over the random
    corpus: every program must run through a session without a single
    illegal transition or unknown address (the session raises on both)."""
    bad = []
    for i, (src, query) in enumerate(corpus200):
        try:
            # 2k steps: enough to exercise every event kind; keeps runaway
            # left recursion (quadratic stack snapshots) affordable
            s = create_session_from_source(src, query, step_budget=2_000)
            while s.machine.status != "Done":
                if s.machine.status == "AwaitingBacktrackAnswer":
                    session_answer(s, False)
                else:
                    session_step(s)
            if tutil.grammar_violations(s.log, complete=False):
                bad.append(f"program {i}: grammar")
            pruned: set = set()
            for e in s.log:
                if e.kind == "CutPrune":
                    pruned.update(e.pruned)
                if e.kind == "Redo" and e.address:
                    if any(e.address[: len(p)] == p for p in pruned):
                        bad.append(f"program {i}: redo into pruned")
        except Exception as exc:
            bad.append(f"program {i}: {type(exc).__name__}: {exc}")
    if bad:
        print("\n".join(bad[:10]))
    _report("supporting: event discipline on 200 programs", not bad)
