"""Prolog term representation and the canonical term writer.

Terms are immutable: atoms, integers, variables and compound structures.
Lists are ordinary compounds built from './2' cells ending in the atom '[]'.
Variable bindings live outside the terms (see engine.Bindings), so terms can
be shared freely between the database, the machine and the diagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

# ====== TERM CLASSES ======


class Term:
    """Base class for all Prolog terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(Term):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True)
class Int(Term):
    value: int

    def __repr__(self) -> str:
        return f"Int({self.value})"


@dataclass(frozen=True, slots=True)
class Var(Term):
    """A logic variable. `name` is the display name from the source text,
    `id` makes the variable unique; two Vars are the same variable iff
    their ids are equal."""

    name: str
    id: int

    def __repr__(self) -> str:
        return f"Var({self.name}#{self.id})"


@dataclass(frozen=True, slots=True)
class Struct(Term):
    functor: str
    args: tuple[Term, ...]

    def __repr__(self) -> str:
        return f"Struct({self.functor!r}, {self.args!r})"


EMPTY_LIST = Atom("[]")
TRUE = Atom("true")


def cons(head: Term, tail: Term) -> Struct:
    return Struct(".", (head, tail))


def make_list(items: Sequence[Term], tail: Term = EMPTY_LIST) -> Term:
    out = tail
    for item in reversed(items):
        out = cons(item, out)
    return out


def indicator(t: Term) -> tuple[str, int]:
    """Predicate indicator (functor, arity) of a callable term."""
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Struct):
        return (t.functor, len(t.args))
    raise TypeError(f"not a callable term: {t!r}")


def term_vars(t: Term) -> list[Var]:
    """Distinct variables of t in left-to-right first-occurrence order."""
    seen: dict[int, Var] = {}

    def walk(x: Term) -> None:
        if isinstance(x, Var):
            seen.setdefault(x.id, x)
        elif isinstance(x, Struct):
            for a in x.args:
                walk(a)

    walk(t)
    return list(seen.values())


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Struct):
        for a in t.args:
            yield from subterms(a)


def shift_vars(goals: Sequence[Term], base: int) -> list[Term]:
    """Rename the goals' variables onto fresh ids starting at base, keeping
    display names and sharing. Keeps query variables disjoint from program
    clause variables, which are parsed with their own counter."""
    mapping: dict[int, Var] = {}

    def sh(t: Term) -> Term:
        if isinstance(t, Var):
            v = mapping.get(t.id)
            if v is None:
                v = Var(t.name, base + len(mapping))
                mapping[t.id] = v
            return v
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(sh(a) for a in t.args))
        return t

    return [sh(g) for g in goals]


def alpha_equivalent(t1: Term, t2: Term) -> bool:
    """Structural equality up to a bijective renaming of variables."""
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def eq(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.setdefault(a.id, b.id) != b.id:
                return False
            return bwd.setdefault(b.id, a.id) == a.id
        if isinstance(a, Atom) and isinstance(b, Atom):
            return a.name == b.name
        if isinstance(a, Int) and isinstance(b, Int):
            return a.value == b.value
        if isinstance(a, Struct) and isinstance(b, Struct):
            return (
                a.functor == b.functor
                and len(a.args) == len(b.args)
                and all(eq(x, y) for x, y in zip(a.args, b.args))
            )
        return False

    return eq(t1, t2)


# ====== OPERATOR TABLE ======

# The operator table is fixed (no op/3). Types follow the usual reading:
# xfx: both arguments strictly below the operator priority,
# xfy: right argument may equal it, yfx: left argument may equal it,
# fy: prefix, argument may equal it.

INFIX_OPS: dict[str, tuple[int, str]] = {
    ":-": (1200, "xfx"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
    "==": (700, "xfx"),
    "\\==": (700, "xfx"),
    "is": (700, "xfx"),
    "=:=": (700, "xfx"),
    "=\\=": (700, "xfx"),
    "<": (700, "xfx"),
    ">": (700, "xfx"),
    "=<": (700, "xfx"),
    ">=": (700, "xfx"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "/": (400, "yfx"),
    "mod": (400, "yfx"),
}

PREFIX_OPS: dict[str, tuple[int, str]] = {
    "-": (200, "fy"),
    "?-": (1200, "fx"),
}

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")

_PLAIN_ATOM = None  # compiled lazily below


def _is_plain_atom(name: str) -> bool:
    import re

    global _PLAIN_ATOM
    if _PLAIN_ATOM is None:
        _PLAIN_ATOM = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
    if _PLAIN_ATOM.match(name):
        return True
    if name and all(c in SYMBOL_CHARS for c in name):
        return True
    return name in ("[]", "!", ";", "{}")


def atom_text(name: str, quoting: bool) -> str:
    if not quoting or _is_plain_atom(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


# ====== TERM WRITER ======


def _var_display_table(t: Term) -> dict[int, str]:
    """Assign each distinct named variable a unique display string so the
    output re-parses alpha-equivalently. Collisions get positional suffixes
    (X, X_2, X_3 ...), which keeps the text independent of variable ids."""
    table: dict[int, str] = {}
    used: set[str] = set()
    for v in term_vars(t):
        if v.name == "_":
            table[v.id] = "_"
            continue
        candidate = v.name
        n = 1
        while candidate in used:
            n += 1
            candidate = f"{v.name}_{n}"
        used.add(candidate)
        table[v.id] = candidate
    return table


def _needs_space(left: str, right: str) -> bool:
    if not left or not right:
        return False
    a, b = left[-1], right[0]
    if a in SYMBOL_CHARS and b in SYMBOL_CHARS:
        return True
    ok_a = a.isalnum() or a == "_"
    ok_b = b.isalnum() or b == "_"
    return ok_a and ok_b


def _join(parts: list[str]) -> str:
    out: list[str] = []
    for p in parts:
        if out and _needs_space(out[-1], p):
            out.append(" ")
        out.append(p)
    return "".join(out)


def format_term(t: Term, quoting: bool = False) -> str:
    """Write t in standard notation: operators per the fixed table, lists in
    bracket notation, parentheses only where priority demands them. The
    output re-parses to an alpha-equivalent term."""
    names = _var_display_table(t)

    def fmt(x: Term, maxp: int) -> str:
        if isinstance(x, Atom):
            return atom_text(x.name, quoting)
        if isinstance(x, Int):
            return str(x.value)
        if isinstance(x, Var):
            return names.get(x.id, x.name)
        assert isinstance(x, Struct)
        if x.functor == "." and len(x.args) == 2:
            return fmt_list(x)
        if len(x.args) == 2 and x.functor in INFIX_OPS:
            p, typ = INFIX_OPS[x.functor]
            lmax = p if typ == "yfx" else p - 1
            rmax = p if typ == "xfy" else p - 1
            body = _join([fmt(x.args[0], lmax), x.functor, fmt(x.args[1], rmax)])
            return "(" + body + ")" if p > maxp else body
        if len(x.args) == 1 and x.functor in PREFIX_OPS and x.functor != "?-":
            p, typ = PREFIX_OPS[x.functor]
            amax = p if typ == "fy" else p - 1
            body = _join([x.functor, fmt(x.args[0], amax)])
            return "(" + body + ")" if p > maxp else body
        args = ",".join(fmt(a, 999) for a in x.args)
        return f"{atom_text(x.functor, quoting)}({args})"

    def fmt_list(x: Term) -> str:
        items: list[str] = []
        while isinstance(x, Struct) and x.functor == "." and len(x.args) == 2:
            items.append(fmt(x.args[0], 999))
            x = x.args[1]
        if isinstance(x, Atom) and x.name == "[]":
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + fmt(x, 999) + "]"

    return fmt(t, 1200)
