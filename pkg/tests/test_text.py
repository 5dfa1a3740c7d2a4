import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probneed.ctors import CtorTable
from probneed.generate import GenConfig, Generator
from probneed.terms import BOT, ID, K, K2, OMEGA, Lam, Let, Name, Var, alpha_equiv
from probneed.text import ParseError, parse, show


def test_parse_lambda():
    assert parse(r"\x.x") == Lam(Name("x"), Var(Name("x")))


def test_choice_is_not_associative():
    with pytest.raises(ParseError):
        parse("a <+> b <+> c")
    assert show(parse("(a <+> b) <+> c")) == "(a <+> b) <+> c"


def test_let_with_two_bindings():
    e = parse("let x=K, y=K2 in x y")
    assert isinstance(e, Let) and len(e.binds) == 2


def test_shorthands_expand():
    assert parse("id") == ID and parse("K") == K and parse("K2") == K2
    assert parse("Bot") == BOT and parse("Omega") == OMEGA


def test_multi_binder_lambda_and_comments():
    e = parse("\\x y. x -- the first projection\n")
    assert alpha_equiv(e, K)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse("let x = in x")
    assert "1:" in str(exc.value)


def test_unsaturated_constructor_rejected():
    with pytest.raises(ParseError):
        parse("Cons a")


def test_extended_syntax_gated():
    with pytest.raises(ParseError):
        parse("seq a b", extended=False)
    parse("case True of {True -> a; False -> b}")


def test_custom_constructor_table():
    table = CtorTable.parse("Maybe: Nothing/0, Just/1 -- option type")
    e = parse("case Just a of {Nothing -> b; Just y -> y}", table)
    assert show(e) == "case Just a of {Nothing -> b; Just y -> y}"


def test_minimal_parentheses():
    assert show(parse(r"(\x.x) ((\y.y) z)")) == r"(\x.x) ((\y.y) z)"
    assert show(parse("(f a) b")) == "f a b"


def test_short_printing_folds_combinators():
    assert show(parse("[.] id Bot"), short=True) == "[.] id Bot"
    assert show(parse(r"(\p.\q.p) <+> (\p.\q.q)"), short=True) == "K <+> K2"
    # open terms are never folded
    assert show(parse(r"\p.y"), short=True) == r"\p.y"


@st.composite
def any_terms(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    size = draw(st.integers(4, 30))
    cfg = draw(st.sampled_from([GenConfig(size=size), GenConfig.extended(size),
                                GenConfig.choice_rich(size)]))
    return Generator(cfg, random.Random(seed)).term()


@settings(max_examples=300, deadline=None)
@given(any_terms())
def test_round_trip(e):
    assert alpha_equiv(parse(show(e)), e)
    assert alpha_equiv(parse(show(e, short=True)), e)
