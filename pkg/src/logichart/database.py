"""Clause database with tombstone retract and an always-consistent index.

Clause ids increase monotonically in assertion order and are never reused.
retract never removes a clause; it sets the `retracted` flag, so diagram
addresses built from clause ids stay valid for the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import Term, format_term, indicator


@dataclass(slots=True)
class Clause:
    id: int
    head: Term
    body: tuple[Term, ...]
    retracted: bool = False

    def text(self) -> str:
        if not self.body:
            return format_term(self.head, quoting=True)
        from .terms import Struct

        goal: Term = self.body[-1]
        for g in reversed(self.body[:-1]):
            goal = Struct(",", (g, goal))
        return format_term(Struct(":-", (self.head, goal)), quoting=True)


@dataclass(slots=True)
class Program:
    """Clause store plus a predicate index mapping (functor, arity) to the
    clause-id list in database order (asserta prepends, assertz appends)."""

    clauses: list[Clause] = field(default_factory=list)
    index: dict[tuple[str, int], list[int]] = field(default_factory=dict)
    by_id: dict[int, Clause] = field(default_factory=dict)
    next_id: int = 0
    var_counter: int = 0

    def add_clause(self, head: Term, body: tuple[Term, ...], front: bool = False) -> Clause:
        clause = Clause(self.next_id, head, body)
        self.next_id += 1
        self.clauses.append(clause)
        self.by_id[clause.id] = clause
        ids = self.index.setdefault(indicator(head), [])
        if front:
            ids.insert(0, clause.id)
        else:
            ids.append(clause.id)
        return clause

    def predicate_ids(self, ind: tuple[str, int]) -> list[int]:
        return list(self.index.get(ind, ()))

    def live_ids(self, ind: tuple[str, int]) -> list[int]:
        return [i for i in self.index.get(ind, ()) if not self.by_id[i].retracted]

    def defined(self, ind: tuple[str, int]) -> bool:
        return ind in self.index

    def copy(self) -> Program:
        """Independent working copy; terms are immutable and stay shared."""
        p = Program(next_id=self.next_id, var_counter=self.var_counter)
        for c in self.clauses:
            cc = Clause(c.id, c.head, c.body, c.retracted)
            p.clauses.append(cc)
            p.by_id[cc.id] = cc
        p.index = {ind: list(ids) for ind, ids in self.index.items()}
        return p
