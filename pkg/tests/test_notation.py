from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gamering import Arena
from gamering.notation import (Add, BraceGame, Half, IntLit, Let, Mul, Name, Neg, ParseError, Sub,
                               eval_text, evaluate, format_expr, format_game, parse, tokenize)


def test_parse_examples(arena):
    assert parse("{|}") == BraceGame((), ())
    assert eval_text(arena, "{|}") == 0
    assert eval_text(arena, "let K = 1/2 + 1/2 - 1 in {0|K||0|0}") == arena.constant("K_bullet")
    assert eval_text(arena, "{0,1|}") == arena.constant("2°")
    assert eval_text(arena, "2°") == eval_text(arena, "2o") == arena.constant("2°")


def test_multibar_nesting():
    assert parse("{0|1||2|3}") == BraceGame(
        (BraceGame((IntLit(0),), (IntLit(1),)),), (BraceGame((IntLit(2),), (IntLit(3),)),))
    assert parse("{0,1|||2|}") == BraceGame((IntLit(0), IntLit(1)), (BraceGame((IntLit(2),), ()),))
    assert parse("{a|b||c|||d}") == BraceGame(
        (BraceGame((BraceGame((Name("a"),), (Name("b"),)),), (Name("c"),)),), (Name("d"),))


def test_operators_and_precedence():
    assert parse("1+2·3") == Add(IntLit(1), Mul(IntLit(2), IntLit(3)))
    assert parse("-1-2") == Sub(Neg(IntLit(1)), IntLit(2))
    assert parse("(1+1)·*") == Mul(Add(IntLit(1), IntLit(1)), Name("*"))
    assert parse("1 . 2") == Mul(IntLit(1), IntLit(2))
    assert parse("1 − 2") == Sub(IntLit(1), IntLit(2))
    assert parse("1/2") == Half()
    assert parse("let x = 1 in x + x") == Let("x", IntLit(1), Add(Name("x"), Name("x")))


def test_evaluate_examples(arena, rel):
    assert eval_text(arena, "1+1") == arena.integer(2)
    assert rel.iter_eq(eval_text(arena, "(1+1)·*"), 0)
    assert eval_text(arena, "-0") == 0
    assert eval_text(arena, "3 - 1") != arena.integer(2)
    assert rel.iter_eq(eval_text(arena, "3 - 1"), arena.integer(2))


def test_printer(arena):
    star = arena.constant("*")
    assert format_game(arena, 0) == "{|}"
    assert format_game(arena, star) == "{{|}|{|}}"
    assert format_game(arena, arena.constant("2°")) == "{{|},{{|}|}|}"


NEGATIVE = [
    "{", "}", "{0|1", "{0|1}}", "{0,|1}", "{,0|1}", "{0 1|}", "{0|1||2||3}", "{0|1|2}",
    "{0,1}", "1 +", "(1", "1)", "let = 1 in 2", "let x 1 in x", "let x = 1 x", "2/3",
    "1/", "$", "{0|#}", "*·", "··1", "{0|1}{1|0}", "x", "K_nope + 1", "{0||1||2}",
]


@pytest.mark.parametrize("text", NEGATIVE)
def test_negative_corpus(arena, text):
    with pytest.raises(ParseError) as info:
        eval_text(arena, text)
    assert 0 <= info.value.pos <= len(text)
    assert str(info.value).startswith(f"position {info.value.pos}:")


def test_negative_corpus_positions():
    def pos(t):
        with pytest.raises(ParseError) as info:
            parse(t)
        return info.value.pos
    assert pos("{0|1||2||3}") == 7
    assert pos("{0|1") == 4
    assert pos("1 + $") == 4
    assert pos("{0,|1}") == 2


def test_tokenize_2o_is_not_an_identifier_prefix():
    kinds = [t.kind for t in tokenize("2o 2oo")]
    assert kinds[:1] == ["twocirc"] and "int" in kinds


def test_round_trip_universe():
    a = Arena()
    for g in a.enumerate_forms(2):
        assert eval_text(a, format_game(a, g)) == g
    for name in ("*", "1/2", "2°", "G_ex", "K_half", "K_bullet", "K_rm", "M3", "-3", "5"):
        g = a.constant(name)
        assert eval_text(a, format_game(a, g)) == g


_atoms = st.one_of(st.integers(0, 3).map(IntLit), st.just(Half()),
                   st.sampled_from(["*", "2°", "G_ex", "M3"]).map(Name))


def _compound(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(children, children).map(lambda p: Add(*p)),
        st.tuples(children, children).map(lambda p: Sub(*p)),
        st.tuples(children, children).map(lambda p: Mul(*p)),
        st.tuples(st.lists(children, max_size=2), st.lists(children, max_size=2)).map(
            lambda p: BraceGame(tuple(p[0]), tuple(p[1]))),
    )


@settings(max_examples=200, deadline=None)
@given(st.recursive(_atoms, _compound, max_leaves=6))
def test_format_parse_round_trip(expr):
    assert parse(format_expr(expr)) == expr


@settings(max_examples=60, deadline=None)
@given(st.recursive(_atoms, lambda c: st.one_of(
    st.tuples(c, c).map(lambda p: Add(*p)), c.map(Neg),
    st.tuples(st.lists(c, max_size=2), st.lists(c, max_size=2)).map(
        lambda p: BraceGame(tuple(p[0]), tuple(p[1])))), max_leaves=4))
def test_evaluate_printed_form(expr):
    a = Arena()
    g = evaluate(a, expr)
    assert eval_text(a, format_game(a, g)) == g
