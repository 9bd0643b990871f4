"""Reader: tokenizer and operator-precedence parser for the Prolog subset.

The token set is small: atoms (plain, symbolic or quoted), variables,
non-negative integers, punctuation and the clause-ending dot. Floats,
strings and user-defined operators are not part of the language. A '.' ends
a clause only when followed by layout or end of input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .database import Clause, Program
from .terms import (
    EMPTY_LIST,
    INFIX_OPS,
    PREFIX_OPS,
    SYMBOL_CHARS,
    Atom,
    Int,
    Struct,
    Term,
    Var,
    make_list,
)


class ParseError(ValueError):
    """Syntax error with 1-based source position and what was expected."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


# ====== TOKENIZER ======

# kinds: atom var int punct end eof.  punct covers ( ) [ ] | , and the
# open_ct flag marks a '(' glued to the preceding atom (functor application).


@dataclass(slots=True)
class Token:
    kind: str
    text: str
    value: int = 0
    line: int = 1
    col: int = 1
    open_ct: bool = False


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(src)

    def err(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    def push(kind: str, text: str, value: int = 0, open_ct: bool = False) -> None:
        toks.append(Token(kind, text, value, line, col, open_ct))

    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            push("int", src[i:j], value=int(src[i:j]))
            col += j - i
            i = j
            continue
        if c == "_" or c.isalpha():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = "var" if (c == "_" or c.isupper()) else "atom"
            push(kind, word)
            col += j - i
            i = j
            continue
        if c == "'":
            j = i + 1
            out: list[str] = []
            while True:
                if j >= n:
                    raise err("unterminated quoted atom")
                ch = src[j]
                if ch == "'":
                    if j + 1 < n and src[j + 1] == "'":
                        out.append("'")
                        j += 2
                        continue
                    j += 1
                    break
                if ch == "\\":
                    if j + 1 >= n:
                        raise err("unterminated escape in quoted atom")
                    esc = src[j + 1]
                    mapped = {"n": "\n", "t": "\t", "\\": "\\", "'": "'"}.get(esc)
                    if mapped is None:
                        raise err(f"unknown escape \\{esc} in quoted atom")
                    out.append(mapped)
                    j += 2
                    continue
                if ch == "\n":
                    raise err("newline in quoted atom")
                out.append(ch)
                j += 1
            push("atom", "".join(out))
            col += j - i
            i = j
            continue
        if c in "()[]|,":
            open_ct = False
            if c == "(" and toks and toks[-1].kind == "atom":
                prev = toks[-1]
                glued = i > 0 and not src[i - 1].isspace()
                open_ct = glued and prev.line == line
            push("punct", c, open_ct=open_ct)
            i += 1
            col += 1
            continue
        if c == "!":
            push("atom", "!")
            i += 1
            col += 1
            continue
        if c == ";":
            push("atom", ";")
            i += 1
            col += 1
            continue
        if c in SYMBOL_CHARS:
            j = i
            while j < n and src[j] in SYMBOL_CHARS:
                j += 1
            cluster = src[i:j]
            # A solitary '.' followed by layout/EOF/comment ends the clause.
            if cluster == "." and (j >= n or src[j].isspace() or src[j] == "%"):
                push("end", ".")
            else:
                push("atom", cluster)
            col += j - i
            i = j
            continue
        raise err(f"unexpected character {c!r}")
    toks.append(Token("eof", "", line=line, col=col))
    return toks


# ====== PARSER ======


@dataclass(slots=True)
class _Scope:
    """Variable scope of one clause or query: name -> Var, '_' always fresh."""

    counter: list[int]
    names: dict[str, Var] = field(default_factory=dict)

    def lookup(self, name: str) -> Var:
        if name == "_":
            return self.fresh(name)
        v = self.names.get(name)
        if v is None:
            v = self.fresh(name)
            self.names[name] = v
        return v

    def fresh(self, name: str) -> Var:
        self.counter[0] += 1
        return Var(name, self.counter[0] - 1)


class _Parser:
    def __init__(self, toks: list[Token], scope: _Scope):
        self.toks = toks
        self.pos = 0
        self.scope = scope

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def err(self, msg: str, tok: Token | None = None) -> ParseError:
        t = tok or self.peek()
        return ParseError(msg, t.line, t.col)

    def expect_punct(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "punct" or t.text != text:
            raise self.err(f"expected {text!r}")
        return self.next()

    # --- Pratt core.  Returns (term, priority of the term as written).

    def parse(self, maxp: int) -> Term:
        left, lp = self.primary(maxp)
        while True:
            t = self.peek()
            name = None
            if t.kind == "atom" and t.text in INFIX_OPS:
                name = t.text
            elif t.kind == "punct" and t.text == ",":
                name = ","
            if name is None:
                break
            p, typ = INFIX_OPS[name]
            if p > maxp:
                break
            lmax = p if typ == "yfx" else p - 1
            if lp > lmax:
                break
            self.next()
            rmax = p if typ == "xfy" else p - 1
            right = self.parse(rmax)
            left = Struct(name, (left, right))
            lp = p
        return left

    def primary(self, maxp: int) -> tuple[Term, int]:
        t = self.next()
        if t.kind == "int":
            return Int(t.value), 0
        if t.kind == "var":
            return self.scope.lookup(t.text), 0
        if t.kind == "punct" and t.text == "(":
            inner = self.parse(1200)
            self.expect_punct(")")
            return inner, 0
        if t.kind == "punct" and t.text == "[":
            return self.parse_list(), 0
        if t.kind == "atom":
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(" and nxt.open_ct:
                self.next()
                args = [self.parse(999)]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.next()
                    args.append(self.parse(999))
                self.expect_punct(")")
                return Struct(t.text, tuple(args)), 0
            if t.text in PREFIX_OPS and self.starts_term(nxt):
                p, typ = PREFIX_OPS[t.text]
                if p <= maxp:
                    amax = p if typ == "fy" else p - 1
                    arg = self.parse(amax)
                    if t.text == "-" and isinstance(arg, Int):
                        return Int(-arg.value), 0
                    return Struct(t.text, (arg,)), p
            if t.text in INFIX_OPS and t.text not in PREFIX_OPS:
                raise self.err(f"operator {t.text!r} needs a left argument", t)
            return Atom(t.text), 0
        raise self.err("expected a term", t)

    def starts_term(self, t: Token) -> bool:
        if t.kind in ("int", "var"):
            return True
        if t.kind == "punct" and t.text in ("(", "["):
            return True
        if t.kind == "atom":
            return t.text not in INFIX_OPS or t.text in PREFIX_OPS
        return False

    def parse_list(self) -> Term:
        if self.peek().kind == "punct" and self.peek().text == "]":
            self.next()
            return EMPTY_LIST
        items = [self.parse(999)]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            items.append(self.parse(999))
        tail: Term = EMPTY_LIST
        if self.peek().kind == "punct" and self.peek().text == "|":
            self.next()
            tail = self.parse(999)
        self.expect_punct("]")
        return make_list(items, tail)


def _split_body(t: Term) -> list[Term]:
    goals: list[Term] = []
    while isinstance(t, Struct) and t.functor == "," and len(t.args) == 2:
        goals.append(t.args[0])
        t = t.args[1]
    goals.append(t)
    return goals


def _read_terms(src: str, counter: list[int]) -> list[tuple[Term, Token]]:
    """Read a sequence of '.'-terminated terms, one variable scope each."""
    toks = tokenize(src)
    out: list[tuple[Term, Token]] = []
    pos = 0
    while toks[pos].kind != "eof":
        first = toks[pos]
        parser = _Parser(toks, _Scope(counter))
        parser.pos = pos
        term = parser.parse(1200)
        endtok = parser.peek()
        if endtok.kind != "end":
            raise ParseError("expected '.' to end the clause", endtok.line, endtok.col)
        parser.next()
        pos = parser.pos
        out.append((term, first))
    return out


def _check_head(head: Term, tok: Token) -> None:
    if isinstance(head, Var):
        raise ParseError("clause head may not be a variable", tok.line, tok.col)
    if isinstance(head, Int):
        raise ParseError("clause head may not be an integer", tok.line, tok.col)


def parse_program(src: str) -> Program:
    """Parse a clause sequence into a Program. Deterministic: the same text
    always yields the same clause and variable ids."""
    program = Program()
    counter = [0]
    for term, tok in _read_terms(src, counter):
        if isinstance(term, Struct) and term.functor == "?-" and len(term.args) == 1:
            raise ParseError("directives are not supported", tok.line, tok.col)
        if isinstance(term, Struct) and term.functor == ":-" and len(term.args) == 2:
            head, body = term.args
            _check_head(head, tok)
            program.add_clause(head, tuple(_split_body(body)))
        else:
            _check_head(term, tok)
            program.add_clause(term, ())
    program.var_counter = counter[0]
    return program


def parse_query(src: str) -> list[Term]:
    """Parse a query, with or without the '?-' prefix, into its goal list."""
    counter = [0]
    read = _read_terms(src, counter)
    if not read:
        raise ParseError("empty query", 1, 1)
    if len(read) > 1:
        tok = read[1][1]
        raise ParseError("a query is a single '.'-terminated term", tok.line, tok.col)
    term, tok = read[0]
    if isinstance(term, Struct) and term.functor == "?-" and len(term.args) == 1:
        term = term.args[0]
    elif isinstance(term, Atom) and term.name == "?-":
        # bare "?- ." carries no goal
        raise ParseError("empty query", tok.line, tok.col)
    return _split_body(term)


def parse_term(src: str) -> Term:
    """Parse one '.'-terminated term (test helper)."""
    read = _read_terms(src, [0])
    if len(read) != 1:
        raise ParseError("expected exactly one term", 1, 1)
    return read[0][0]
