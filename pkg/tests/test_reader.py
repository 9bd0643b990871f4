"""Reader: clause/query parsing, the fixed operator table, error reporting."""

from __future__ import annotations

import random

import pytest

from logichart import Atom, Int, ParseError, Struct, Var, alpha_equivalent, format_term
from logichart import parse_program, parse_query
from logichart.reader import parse_term

import genprog


def test_fact_parses_to_empty_body():
    p = parse_program("appendList([],X,X).")
    assert len(p.clauses) == 1
    c = p.clauses[0]
    assert c.head.functor == "appendList" and len(c.head.args) == 3
    assert c.body == ()


def test_rule_splits_body_on_commas():
    p = parse_program("f :- g, !, h, fail.")
    c = p.clauses[0]
    assert c.head == Atom("f")
    assert [format_term(g) for g in c.body] == ["g", "!", "h", "fail"]


def test_empty_body_is_a_syntax_error():
    with pytest.raises(ParseError):
        parse_program("f :-.")


def test_query_keeps_goal_order_and_names():
    goals = parse_query("?- test(X,Y,Z).")
    assert len(goals) == 1
    g = goals[0]
    assert g.functor == "test"
    assert [v.name for v in g.args] == ["X", "Y", "Z"]


def test_query_without_arrow_prefix():
    assert parse_query("f.") == parse_query("?- f.")


def test_atom_query():
    assert parse_query("?- f.") == [Atom("f")]


def test_empty_query_is_a_syntax_error():
    with pytest.raises(ParseError):
        parse_query("?- .")


def test_conjunction_is_right_associative():
    t = parse_term("a , b , c.")
    assert t == Struct(",", (Atom("a"), Struct(",", (Atom("b"), Atom("c")))))


def test_operator_priorities():
    t = parse_term("X is 1+2*3.")
    assert t.functor == "is"
    rhs = t.args[1]
    assert rhs.functor == "+" and rhs.args[1].functor == "*"
    t2 = parse_term("1-2-3.")  # yfx: left associative
    assert t2 == Struct("-", (Struct("-", (Int(1), Int(2))), Int(3)))


def test_comparison_operators_parse():
    for op in ["=", "\\=", "==", "\\==", "<", ">", "=<", ">=", "=:=", "=\\="]:
        t = parse_term(f"1 {op} 2.")
        assert t.functor == op and len(t.args) == 2


def test_negative_integers():
    assert parse_term("-1.") == Int(-1)
    assert parse_term("x(- 1).") == Struct("x", (Int(-1),))
    assert parse_term("3 - -1.") == Struct("-", (Int(3), Int(-1)))


def test_list_sugar():
    assert parse_term("[].") == Atom("[]")
    t = parse_term("[a,b].")
    assert t == Struct(".", (Atom("a"), Struct(".", (Atom("b"), Atom("[]")))))
    t2 = parse_term("[H|T].")
    assert t2.functor == "." and isinstance(t2.args[1], Var)


def test_quoted_atoms():
    t = parse_term("'hello world'.")
    assert t == Atom("hello world")
    t2 = parse_term("'it\\'s'.")
    assert t2 == Atom("it's")


def test_comments_are_skipped():
    p = parse_program("% leading\na. % trailing\n% only\nb.\n")
    assert [c.head for c in p.clauses] == [Atom("a"), Atom("b")]


def test_anonymous_variable_is_fresh_per_occurrence():
    t = parse_term("test(_,_,_).")
    ids = {v.id for v in t.args}
    assert len(ids) == 3


def test_variable_head_rejected():
    with pytest.raises(ParseError):
        parse_program("X :- a.")


def test_integer_head_rejected():
    with pytest.raises(ParseError):
        parse_program("1.")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_program("a.\nf :- (g.\n")
    assert exc.value.line == 2
    assert exc.value.col > 0
    assert "line 2" in str(exc.value)


def test_unterminated_clause_is_an_error():
    with pytest.raises(ParseError):
        parse_program("a :- b")


def test_parser_determinism_including_ids():
    src = "f(X) :- g(X, [1|X]), X = a.\ng(a, _).\n"
    p1, p2 = parse_program(src), parse_program(src)
    assert p1.clauses == p2.clauses
    assert p1.var_counter == p2.var_counter


def test_clause_ids_follow_source_order():
    p = parse_program("a.\nb.\nc :- a.\n")
    assert [c.id for c in p.clauses] == [0, 1, 2]
    assert p.live_ids(("c", 0)) == [2]


def test_round_trip_on_random_clauses():
    # format of parse re-parses alpha-equivalently
    rng = random.Random(77)
    for i in range(150):
        t = genprog.gen_term(rng, 0)
        text = format_term(parse_term(t + "."))
        assert alpha_equivalent(parse_term(text + "."), parse_term(t + "."))


def test_round_trip_on_corpus_programs():
    for i in range(30):
        src, query = genprog.gen_program(random.Random(1000 + i))
        p = parse_program(src)
        for c in p.clauses:
            if c.body:
                text = format_term(Struct(":-", (c.head, _conj(c.body)))) + "."
            else:
                text = format_term(c.head) + "."
            c2 = parse_program(text).clauses[0]
            assert alpha_equivalent(c.head, c2.head)
            assert len(c.body) == len(c2.body)
            for a, b in zip(c.body, c2.body):
                assert alpha_equivalent(a, b) or (
                    isinstance(a, Var) and isinstance(b, Var)
                )


def _conj(goals):
    t = goals[-1]
    for g in reversed(goals[:-1]):
        t = Struct(",", (g, t))
    return t
