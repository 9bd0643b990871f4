"""Resolution engine: an explicit-step machine emitting one TraceEvent per step.

The machine keeps a goal stack (goals to prove plus exit markers for calls in
progress), a choicepoint stack for clause alternatives, and a trail for
unbinding on backtracking. Events reference static diagram addresses; a
runtime call whose static path was cut off at a recursion marker is clamped
to the deepest existing ancestor address, and re-entrant activations at an
already-open address stay silent so that the per-address event pattern
Call (Exit|Fail) (Redo (Exit|Fail))* holds for every run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping

from .database import Clause, Program
from .terms import (
    Atom,
    Int,
    Struct,
    Term,
    Var,
    format_term,
    indicator,
    shift_vars,
    term_vars,
)

# ====== ADDRESSES ======

# A node address is a path of segments from the diagram root:
# ("body", i) selects the i-th horizontal goal, ("alt", clause_id) selects
# the alternative expanding that clause.

Segment = tuple[str, int]
Address = tuple[Segment, ...]

ROOT_ADDRESS: Address = ()


def address_to_json(addr: Address) -> list[dict[str, int]]:
    return [{kind: value} for kind, value in addr]


def address_from_json(data: Iterable[Mapping[str, int]]) -> Address:
    out: list[Segment] = []
    for seg in data:
        (kind, value), = seg.items()
        if kind not in ("body", "alt"):
            raise ValueError(f"bad address segment {seg!r}")
        out.append((kind, value))
    return tuple(out)


# ====== SUBSTITUTIONS AND UNIFICATION ======

Substitution = dict[int, Term]


def walk(t: Term, bindings: Mapping[int, Term]) -> Term:
    while isinstance(t, Var):
        bound = bindings.get(t.id)
        if bound is None:
            return t
        t = bound
    return t


def resolve(t: Term, bindings: Mapping[int, Term]) -> Term:
    """Apply bindings exhaustively; the result contains only unbound Vars."""
    t = walk(t, bindings)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(resolve(a, bindings) for a in t.args))
    return t


def _occurs(v: Var, t: Term, bindings: Mapping[int, Term]) -> bool:
    t = walk(t, bindings)
    if isinstance(t, Var):
        return t.id == v.id
    if isinstance(t, Struct):
        return any(_occurs(v, a, bindings) for a in t.args)
    return False


def _unify(t1: Term, t2: Term, bindings: Substitution, trail: list[int]) -> bool:
    """Destructive unification with occurs check; records bound ids on trail.
    On failure, partial bindings remain: undo to a mark is the caller's job."""
    t1 = walk(t1, bindings)
    t2 = walk(t2, bindings)
    if isinstance(t1, Var):
        if isinstance(t2, Var) and t1.id == t2.id:
            return True
        if _occurs(t1, t2, bindings):
            return False
        bindings[t1.id] = t2
        trail.append(t1.id)
        return True
    if isinstance(t2, Var):
        return _unify(t2, t1, bindings, trail)
    if isinstance(t1, Atom) and isinstance(t2, Atom):
        return t1.name == t2.name
    if isinstance(t1, Int) and isinstance(t2, Int):
        return t1.value == t2.value
    if isinstance(t1, Struct) and isinstance(t2, Struct):
        if t1.functor != t2.functor or len(t1.args) != len(t2.args):
            return False
        return all(_unify(a, b, bindings, trail) for a, b in zip(t1.args, t2.args))
    return False


def unify(t1: Term, t2: Term, s: Mapping[int, Term]) -> Substitution | None:
    """Most general unifier of t1 and t2 under s, or None. s is not mutated."""
    out: Substitution = dict(s)
    if _unify(t1, t2, out, []):
        return out
    return None


def rename_apart(c: Clause, counter: int) -> Clause:
    """Fresh copy of c: every variable replaced by a new Var with the same
    display name, ids allocated from counter upward."""
    mapping: dict[int, Var] = {}

    def ren(t: Term) -> Term:
        if isinstance(t, Var):
            v = mapping.get(t.id)
            if v is None:
                v = Var(t.name, counter + len(mapping))
                mapping[t.id] = v
            return v
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(ren(a) for a in t.args))
        return t

    head = ren(c.head)
    body = tuple(ren(g) for g in c.body)
    return Clause(c.id, head, body, c.retracted)


def clause_var_count(c: Clause) -> int:
    seen: set[int] = set()
    for t in (c.head, *c.body):
        seen.update(v.id for v in term_vars(t))
    return len(seen)


# ====== TRACE EVENTS ======

EVENT_KINDS = (
    "Call",
    "Exit",
    "Fail",
    "Redo",
    "CutPrune",
    "DbAssertA",
    "DbAssertZ",
    "DbRetract",
    "Output",
    "SolutionFound",
    "PromptBacktrack",
    "QueryDone",
)


@dataclass(frozen=True, slots=True)
class TraceEvent:
    kind: str
    address: Address | None = None
    text: str = ""
    bindings: tuple[tuple[str, str], ...] = ()
    clause_id: int | None = None
    clause_text: str = ""
    pruned: tuple[Address, ...] = ()
    success: bool | None = None
    solutions: int | None = None


class MachineError(RuntimeError):
    """Raised on protocol misuse (stepping a finished machine) or on an
    internal event-discipline violation."""


class PrologError(Exception):
    """Runtime Prolog error (instantiation, type, evaluation); aborts the run."""


# ====== MACHINE ======


@dataclass(frozen=True, slots=True)
class GoalFrame:
    term: Term
    addr: Address
    barrier: int
    ancestors: frozenset[tuple[str, int]]
    clamped: bool


@dataclass(slots=True, eq=False)
class ExitFrame:
    """Marker for a user-goal call in progress; popping it means the call
    succeeded. Identity (not value) distinguishes activations."""

    addr: Address
    goal: Term
    visible: bool
    suffix: str


Frame = GoalFrame | ExitFrame


@dataclass(slots=True, eq=False)
class Choicepoint:
    frame: GoalFrame
    owner_visible: bool
    owner_suffix: str
    remaining: list[int]
    continuation: tuple[Frame, ...]
    trail_mark: int
    children_barrier: int


BUILTIN_INDICATORS = frozenset(
    [
        ("true", 0),
        ("fail", 0),
        ("!", 0),
        ("write", 1),
        ("nl", 0),
        ("=", 2),
        ("\\=", 2),
        ("==", 2),
        ("\\==", 2),
        ("is", 2),
        ("=:=", 2),
        ("=\\=", 2),
        ("<", 2),
        (">", 2),
        ("=<", 2),
        (">=", 2),
        ("asserta", 1),
        ("assertz", 1),
        ("retract", 1),
        ("var", 1),
        ("nonvar", 1),
        ("atom", 1),
    ]
)

RUNNING = "Running"
SUCCEEDED = "Succeeded"
FAILED = "Failed"
AWAITING = "AwaitingBacktrackAnswer"
DONE = "Done"


class Machine:
    """One query execution over a working copy of the program."""

    def __init__(self, program: Program, query: list[Term], step_budget: int = 100_000):
        if not query:
            raise MachineError("query must contain at least one goal")
        self.program = program.copy()
        base = self.program.var_counter
        self.query = shift_vars(query, base)
        all_query_vars = term_vars(Struct("q", tuple(self.query)))
        self.query_vars = [v for v in all_query_vars if v.name != "_"]
        self.synthetic = self.program.add_clause(Atom("prolog_program"), tuple(self.query))
        self._var_counter = base + len(all_query_vars)
        self.bindings: Substitution = {}
        self.trail: list[int] = []
        self.goal_stack: list[Frame] = []
        self.cp_stack: list[Choicepoint] = []
        self.output_parts: list[str] = []
        self.solutions = 0
        self.status = RUNNING
        self.error: str | None = None
        self.step_budget = step_budget
        self._budget_left = step_budget
        self._pending: deque[TraceEvent] = deque()
        self._last_node_event: dict[Address, str] = {}
        for i, goal in enumerate(reversed(self.query)):
            pos = len(self.query) - 1 - i
            self.goal_stack.append(
                GoalFrame(goal, (("body", pos),), 0, frozenset(), False)
            )

    # --- public surface

    @property
    def output(self) -> str:
        return "".join(self.output_parts)

    @property
    def can_step(self) -> bool:
        return self.status in (RUNNING, SUCCEEDED, FAILED)

    def step(self) -> TraceEvent:
        """Advance by exactly one event."""
        if not self.can_step:
            raise MachineError(f"cannot step: status is {self.status}")
        if not self._pending:
            self._advance()
        ev = self._pending.popleft()
        if ev.kind == "PromptBacktrack":
            self.status = AWAITING
        elif ev.kind == "QueryDone":
            self.status = DONE
        return ev

    def answer_backtrack(self, more: bool) -> list[TraceEvent]:
        """Answer the backtracking prompt. more=True fails into the most
        recent choicepoint (subsequent steps emit the Redo events); more=False
        finishes the run and returns the QueryDone event directly."""
        if self.status != AWAITING:
            raise MachineError(f"no backtrack prompt pending: status is {self.status}")
        if more:
            self.status = RUNNING
            self._unwind()
            return []
        ev = TraceEvent(
            "QueryDone", success=self.solutions > 0, solutions=self.solutions
        )
        self.status = DONE
        return [ev]

    def db_change(self, kind: str, head: Term, body: tuple[Term, ...]) -> TraceEvent:
        """Apply an assert/retract to the live database and return the Db*
        event describing it. kind is one of asserta|assertz|retract; for
        retract, head/body name the stored clause to cross out."""
        if kind in ("asserta", "assertz"):
            clause = self.program.add_clause(head, body, front=kind == "asserta")
            return TraceEvent(
                "DbAssertA" if kind == "asserta" else "DbAssertZ",
                clause_id=clause.id,
                clause_text=clause.text(),
            )
        if kind == "retract":
            for clause in self.program.clauses:
                if clause.head is head and clause.body is body and not clause.retracted:
                    clause.retracted = True
                    return TraceEvent(
                        "DbRetract", clause_id=clause.id, clause_text=clause.text()
                    )
            raise MachineError("retract target not found")
        raise MachineError(f"unknown db change {kind!r}")

    # --- event production

    def _emit(self, ev: TraceEvent) -> None:
        if ev.kind == "QueryDone":
            self.status = SUCCEEDED if ev.success else FAILED
        if ev.kind == "SolutionFound":
            self.solutions += 1
        if ev.kind in ("Call", "Exit", "Fail", "Redo"):
            assert ev.address is not None
            self._last_node_event[ev.address] = ev.kind
        self._pending.append(ev)

    def _goal_event(
        self, kind: str, addr: Address, goal: Term, suffix: str
    ) -> TraceEvent:
        text = format_term(resolve(goal, self.bindings), quoting=True) + suffix
        pairs = tuple(
            (v.name, format_term(resolve(v, self.bindings), quoting=True))
            for v in term_vars(goal)
            if v.name != "_"
        )
        return TraceEvent(kind, address=addr, text=text, bindings=pairs)

    def _emit_open(self, addr: Address, goal: Term, suffix: str) -> bool:
        """Emit the call-type event for a new activation unless the address
        is already open (re-entrant recursion). Returns visibility."""
        if self._is_active(addr):
            return False
        last = self._last_node_event.get(addr)
        if last is None:
            kind = "Call"
        elif last in ("Exit", "Fail"):
            kind = "Redo"
        else:
            raise MachineError(f"event pattern violated at {addr}: {last} then open")
        self._emit(self._goal_event(kind, addr, goal, suffix))
        return True

    def _emit_close(self, kind: str, addr: Address, goal: Term, suffix: str) -> None:
        self._emit(self._goal_event(kind, addr, goal, suffix))

    def _is_active(self, addr: Address) -> bool:
        return any(isinstance(f, ExitFrame) and f.addr == addr for f in self.goal_stack)

    # --- trail

    def _mark(self) -> int:
        return len(self.trail)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.bindings[self.trail.pop()]

    def _fresh_clause(self, c: Clause) -> Clause:
        renamed = rename_apart(c, self._var_counter)
        self._var_counter += clause_var_count(c)
        return renamed

    # --- the micro-op loop

    def _advance(self) -> None:
        while not self._pending:
            self._budget_left -= 1
            if self._budget_left < 0:
                self._abort("resource error: step budget exceeded (runaway recursion?)")
                return
            if not self.goal_stack:
                self._solution()
                return
            frame = self.goal_stack.pop()
            if isinstance(frame, ExitFrame):
                if frame.visible:
                    self._emit_close("Exit", frame.addr, frame.goal, frame.suffix)
                continue
            try:
                self._call(frame)
            except PrologError as e:
                self._abort(str(e))
                return

    def _solution(self) -> None:
        pairs = tuple(
            (v.name, format_term(resolve(v, self.bindings), quoting=True))
            for v in self.query_vars
        )
        self._emit(
            TraceEvent(
                "SolutionFound",
                address=ROOT_ADDRESS,
                bindings=pairs,
                solutions=self.solutions + 1,
            )
        )
        if self.query_vars:
            self._emit(TraceEvent("PromptBacktrack", address=ROOT_ADDRESS))
        else:
            self._emit(
                TraceEvent("QueryDone", success=True, solutions=self.solutions)
            )

    def _call(self, frame: GoalFrame) -> None:
        goal = walk(frame.term, self.bindings)
        if isinstance(goal, Var):
            raise PrologError("instantiation error: unbound goal")
        if isinstance(goal, Int):
            raise PrologError(f"type error: integer {goal.value} is not callable")
        ind = indicator(goal)
        clamp_here = frame.clamped or ind in frame.ancestors
        suffix = ""
        if clamp_here:
            depth = sum(
                1 for f in self.goal_stack
                if isinstance(f, ExitFrame) and f.addr == frame.addr
            ) + 1
            suffix = f" [depth {depth}]"
        visible = self._emit_open(frame.addr, frame.term, suffix)
        if isinstance(frame.term, Var):
            # meta-call: the static node is a bare variable with no expanded
            # alternatives, so anything it proves stays at this address
            frame = replace(frame, clamped=True)
        if ind in BUILTIN_INDICATORS:
            self._builtin(frame, goal, ind, visible, suffix)
            return
        if not self.program.defined(ind):
            if visible:
                self._emit(
                    replace(
                        self._goal_event("Fail", frame.addr, frame.term, suffix),
                        text=f"existence error: unknown predicate {ind[0]}/{ind[1]}",
                    )
                )
            self._unwind()
            return
        candidates = self.program.live_ids(ind)
        if not candidates:
            if visible:
                self._emit_close("Fail", frame.addr, frame.term, suffix)
            self._unwind()
            return
        cp = Choicepoint(
            frame=frame,
            owner_visible=visible,
            owner_suffix=suffix,
            remaining=candidates,
            continuation=tuple(self.goal_stack),
            trail_mark=self._mark(),
            children_barrier=len(self.cp_stack),
        )
        self.cp_stack.append(cp)
        if not self._resume_top():
            self._unwind()

    def _resume_top(self) -> bool:
        """Try the top choicepoint's remaining clauses in order. On success
        the clause body is pushed and True returned; on exhaustion the
        choicepoint is popped, the owner's Fail emitted, and False returned."""
        cp = self.cp_stack[-1]
        frame = cp.frame
        while cp.remaining:
            cid = cp.remaining.pop(0)
            clause = self.program.by_id[cid]
            if clause.retracted:
                continue
            self._undo(cp.trail_mark)
            self.goal_stack = list(cp.continuation)
            renamed = self._fresh_clause(clause)
            if not _unify(frame.term, renamed.head, self.bindings, self.trail):
                continue
            if not cp.remaining:
                self.cp_stack.pop()
            marker = ExitFrame(frame.addr, frame.term, cp.owner_visible, cp.owner_suffix)
            self.goal_stack.append(marker)
            ind = indicator(renamed.head)
            inherit_clamp = frame.clamped or ind in frame.ancestors
            for i in range(len(renamed.body) - 1, -1, -1):
                if inherit_clamp:
                    child_addr = frame.addr
                    child_anc = frame.ancestors
                else:
                    child_addr = frame.addr + (("alt", cid), ("body", i))
                    child_anc = frame.ancestors | {ind}
                self.goal_stack.append(
                    GoalFrame(
                        renamed.body[i],
                        child_addr,
                        cp.children_barrier,
                        child_anc,
                        inherit_clamp,
                    )
                )
            return True
        self._undo(cp.trail_mark)
        self.goal_stack = list(cp.continuation)
        self.cp_stack.pop()
        if cp.owner_visible:
            self._emit_close("Fail", frame.addr, frame.term, cp.owner_suffix)
        return False

    def _unwind(self) -> None:
        """Backtrack: fail abandoned calls, reopen restored ones, retry the
        most recent choicepoint; on global exhaustion finish the query."""
        while True:
            if not self.cp_stack:
                for f in reversed(self.goal_stack):
                    if isinstance(f, ExitFrame) and f.visible:
                        self._emit_close("Fail", f.addr, f.goal, f.suffix)
                self.goal_stack = []
                self._emit(
                    TraceEvent(
                        "QueryDone",
                        success=self.solutions > 0,
                        solutions=self.solutions,
                        text=self.error or "",
                    )
                )
                return
            cp = self.cp_stack[-1]
            cont_ids = {id(f) for f in cp.continuation}
            for f in reversed(self.goal_stack):
                if (
                    isinstance(f, ExitFrame)
                    and id(f) not in cont_ids
                    and f.visible
                ):
                    self._emit_close("Fail", f.addr, f.goal, f.suffix)
            for f in cp.continuation:
                if (
                    isinstance(f, ExitFrame)
                    and f.visible
                    and self._last_node_event.get(f.addr) in ("Exit", "Fail")
                ):
                    self._emit_close("Redo", f.addr, f.goal, f.suffix)
            if cp.owner_visible and self._last_node_event.get(cp.frame.addr) in (
                "Exit",
                "Fail",
            ):
                self._emit_close("Redo", cp.frame.addr, cp.frame.term, cp.owner_suffix)
            if self._resume_top():
                return

    def _abort(self, message: str) -> None:
        self.error = message
        self.goal_stack = []
        self.cp_stack = []
        self._emit(
            TraceEvent(
                "QueryDone", success=False, solutions=self.solutions, text=message
            )
        )

    # --- builtins

    def _builtin(
        self, frame: GoalFrame, goal: Term, ind: tuple[str, int], visible: bool, suffix: str
    ) -> None:
        name, _ = ind
        addr, term = frame.addr, frame.term

        def exit_() -> None:
            if visible:
                self._emit_close("Exit", addr, term, suffix)

        def fail_() -> None:
            if visible:
                self._emit_close("Fail", addr, term, suffix)
            self._unwind()

        args = goal.args if isinstance(goal, Struct) else ()
        if name == "true":
            exit_()
        elif name == "fail":
            fail_()
        elif name == "!":
            pruned: list[Address] = []
            for cp in reversed(self.cp_stack[frame.barrier:]):
                cpf = cp.frame
                if cpf.clamped or isinstance(cpf.term, Var):
                    continue  # no static alternatives under markers or meta-calls
                if indicator(walk(cpf.term, self.bindings)) in cpf.ancestors:
                    continue
                for cid in cp.remaining:
                    clause = self.program.by_id[cid]
                    # statically non-unifiable clauses have no alternative node
                    if clause.retracted or unify(cpf.term, clause.head, {}) is None:
                        continue
                    pruned.append(cpf.addr + (("alt", cid),))
            del self.cp_stack[frame.barrier:]
            self._emit(TraceEvent("CutPrune", address=addr, pruned=tuple(pruned)))
            exit_()
        elif name == "write":
            text = format_term(resolve(args[0], self.bindings), quoting=False)
            self.output_parts.append(text)
            self._emit(TraceEvent("Output", text=text))
            exit_()
        elif name == "nl":
            self.output_parts.append("\n")
            self._emit(TraceEvent("Output", text="\n"))
            exit_()
        elif name == "=":
            if _unify(args[0], args[1], self.bindings, self.trail):
                exit_()
            else:
                fail_()
        elif name == "\\=":
            mark = self._mark()
            unifiable = _unify(args[0], args[1], self.bindings, self.trail)
            self._undo(mark)
            if unifiable:
                fail_()
            else:
                exit_()
        elif name == "==":
            if resolve(args[0], self.bindings) == resolve(args[1], self.bindings):
                exit_()
            else:
                fail_()
        elif name == "\\==":
            if resolve(args[0], self.bindings) != resolve(args[1], self.bindings):
                exit_()
            else:
                fail_()
        elif name == "is":
            value = Int(self._eval(args[1]))
            if _unify(args[0], value, self.bindings, self.trail):
                exit_()
            else:
                fail_()
        elif name in ("=:=", "=\\=", "<", ">", "=<", ">="):
            a = self._eval(args[0])
            b = self._eval(args[1])
            ok = {
                "=:=": a == b,
                "=\\=": a != b,
                "<": a < b,
                ">": a > b,
                "=<": a <= b,
                ">=": a >= b,
            }[name]
            exit_() if ok else fail_()
        elif name in ("asserta", "assertz"):
            head, body = self._clause_arg(args[0])
            stored = self._snapshot_clause(head, body)
            self._emit(self.db_change(name, stored[0], stored[1]))
            exit_()
        elif name == "retract":
            head, body = self._clause_arg(args[0])
            body_term = self._body_term(body)
            hind = indicator(walk(head, self.bindings))
            found = False
            for cid in self.program.live_ids(hind):
                clause = self.program.by_id[cid]
                renamed = self._fresh_clause(clause)
                mark = self._mark()
                if _unify(head, renamed.head, self.bindings, self.trail) and _unify(
                    body_term, self._body_term(renamed.body), self.bindings, self.trail
                ):
                    self._emit(self.db_change("retract", clause.head, clause.body))
                    found = True
                    break
                self._undo(mark)
            if found:
                exit_()
            else:
                fail_()
        elif name == "var":
            if isinstance(walk(args[0], self.bindings), Var):
                exit_()
            else:
                fail_()
        elif name == "nonvar":
            if not isinstance(walk(args[0], self.bindings), Var):
                exit_()
            else:
                fail_()
        elif name == "atom":
            if isinstance(walk(args[0], self.bindings), Atom):
                exit_()
            else:
                fail_()
        else:  # pragma: no cover - table and dispatch kept in sync
            raise MachineError(f"unhandled builtin {name}")

    def _clause_arg(self, t: Term) -> tuple[Term, tuple[Term, ...]]:
        t = walk(t, self.bindings)
        if isinstance(t, Var):
            raise PrologError("instantiation error: unbound clause argument")
        if isinstance(t, Struct) and t.functor == ":-" and len(t.args) == 2:
            head = walk(t.args[0], self.bindings)
            body_term = t.args[1]
            goals: list[Term] = []
            while True:
                bt = walk(body_term, self.bindings)
                if isinstance(bt, Struct) and bt.functor == "," and len(bt.args) == 2:
                    goals.append(bt.args[0])
                    body_term = bt.args[1]
                else:
                    goals.append(bt)
                    break
            body = tuple(goals)
        else:
            head = t
            body = ()
        if isinstance(head, Var):
            raise PrologError("instantiation error: unbound clause head")
        if isinstance(head, Int):
            raise PrologError("type error: integer clause head")
        return head, body

    def _body_term(self, body: tuple[Term, ...]) -> Term:
        if not body:
            return Atom("true")
        out = body[-1]
        for g in reversed(body[:-1]):
            out = Struct(",", (g, out))
        return out

    def _snapshot_clause(self, head: Term, body: tuple[Term, ...]) -> tuple[Term, tuple[Term, ...]]:
        """Fully resolve and freshen an asserted clause so later bindings in
        the running query cannot reach into the stored copy."""
        packed = Struct("c", (head, *body))
        resolved = resolve(packed, self.bindings)
        fresh: dict[int, Var] = {}

        def freshen(t: Term) -> Term:
            if isinstance(t, Var):
                v = fresh.get(t.id)
                if v is None:
                    v = Var(t.name, self._var_counter + len(fresh))
                    fresh[t.id] = v
                return v
            if isinstance(t, Struct):
                return Struct(t.functor, tuple(freshen(a) for a in t.args))
            return t

        snapped = freshen(resolved)
        self._var_counter += len(fresh)
        assert isinstance(snapped, Struct)
        return snapped.args[0], tuple(snapped.args[1:])

    def _eval(self, t: Term) -> int:
        t = walk(t, self.bindings)
        if isinstance(t, Int):
            return t.value
        if isinstance(t, Var):
            raise PrologError("instantiation error: unbound variable in arithmetic")
        if isinstance(t, Struct) and len(t.args) == 2 and t.functor in (
            "+",
            "-",
            "*",
            "/",
            "mod",
        ):
            a = self._eval(t.args[0])
            b = self._eval(t.args[1])
            if t.functor == "+":
                return a + b
            if t.functor == "-":
                return a - b
            if t.functor == "*":
                return a * b
            if t.functor == "/":
                if b == 0:
                    raise PrologError("evaluation error: zero divisor")
                q = a // b
                if q < 0 and q * b != a:
                    q += 1
                return q
            if b == 0:
                raise PrologError("evaluation error: zero divisor")
            return a % b
        if isinstance(t, Struct) and len(t.args) == 1 and t.functor == "-":
            return -self._eval(t.args[0])
        raise PrologError(
            f"type error: {format_term(resolve(t, self.bindings))} is not arithmetic"
        )


def create_machine(program: Program, query: list[Term], step_budget: int = 100_000) -> Machine:
    """Machine over a working copy of program with the synthetic clause
    prolog_program :- Q1,...,Qn appended; the original program is untouched."""
    return Machine(program, query, step_budget)


def run_to_completion(
    m: Machine, answer: Callable[[], bool] | None = None, max_steps: int = 1_000_000
) -> list[TraceEvent]:
    """Drive m until Done, answering prompts via `answer` (default: no).
    Engine-level convenience used by tests and the CLI."""
    events: list[TraceEvent] = []
    steps = 0
    while m.status != DONE:
        if m.status == AWAITING:
            more = answer() if answer is not None else False
            events.extend(m.answer_backtrack(more))
            continue
        events.append(m.step())
        steps += 1
        if steps > max_steps:
            raise MachineError("max_steps exceeded")
    return events
