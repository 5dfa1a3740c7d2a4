import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probneed.convergence import explore
from probneed.ctors import DEFAULT_TABLE, CtorTable
from probneed.generate import GenConfig, Generator
from probneed.reduction import ILL_TYPED, Stuck, Unique, is_whnf, prepare, sr_step
from probneed.terms import C, R, Case, Ctor, Lam, Let, Var, alpha_equiv, children, subterm
from probneed.text import parse, show
from probneed.transform import apply, match_sites


def P(src):
    return parse(src)


def step(src):
    return sr_step(prepare(P(src)))


def undo_abs(before, m):
    """Apply abs at m, then inline the fresh shares it introduced with ucp."""
    after = apply(before, m)
    old = {x for x, _ in subterm(before, m.site).binds}
    fresh = {x for x, _ in subterm(after, m.site).binds} - old
    e = after
    while True:
        ms = [m for m in match_sites(e, "ucp", C, True) if m.witness[0] in fresh]
        if not ms:
            return e
        e = apply(e, ms[0])


# ---------------------------------------------------------------- constructor tables

def test_default_table():
    assert DEFAULT_TABLE.arity("Cons") == 2 and DEFAULT_TABLE.type_of("True") == "Bool"
    assert [c for c, _ in DEFAULT_TABLE.ctors("List")] == ["Nil", "Cons"]


def test_table_rejects_duplicates_and_bad_lines():
    with pytest.raises(ValueError):
        CtorTable.parse("A: X/0\nB: X/1")
    with pytest.raises(ValueError):
        CtorTable.parse("A X/0")
    with pytest.raises(ValueError):
        CtorTable.parse("A: X/two")


# ---------------------------------------------------------------- standard reduction

def test_case_c_nullary_drops_empty_let():
    v = step("case True of {True -> K; False -> K2}")
    assert isinstance(v, Unique) and v.rule == "case-c"
    assert alpha_equiv(v.result, P("K"))


def test_case_c_binds_arguments():
    v = step("case Cons K K2 of {Nil -> K; Cons a b -> a}")
    assert v.rule == "case-c" and alpha_equiv(v.result, P("let a=K, b=K2 in a"))


def test_seq_c():
    v = step(r"seq (\x.x) K")
    assert v.rule == "seq-c" and alpha_equiv(v.result, P("K"))


def test_lcase_and_lseq_float_lets():
    v = step("case (let x=True in x) of {True -> K; False -> K2}")
    assert v.rule == "lcase"
    assert alpha_equiv(v.result, P("let x=True in case x of {True -> K; False -> K2}"))
    v = step("seq (let y=K in y) K2")
    assert v.rule == "lseq" and alpha_equiv(v.result, P("let y=K in seq y K2"))


def test_case_in_shares_arguments():
    v = step("let x = Cons K K2 in case x of {Nil -> K; Cons a b -> a}")
    assert v.rule == "case-in"
    let = v.result
    assert isinstance(let, Let)
    x_val = let.lookup(let.binds[0][0])
    # the constructor arguments are variables now, never copies of K and K2
    assert isinstance(x_val, Ctor) and all(isinstance(a, Var) for a in x_val.args)


def test_ill_typed_scrutinee():
    for src in (r"case (\x.x) of {True -> K; False -> K2}", "case Nil of {True -> K; False -> K2}"):
        v = step(src)
        assert isinstance(v, Stuck) and v.reason == ILL_TYPED


def test_case_choice_leaves():
    leaves = explore(P("case (True <+> False) of {True -> K; False -> K2}"), 2, 100).leaves()
    got = [(l.probseq, l.weight, show(l.expr, short=True)) for l in leaves]
    assert got == [("L", F(1, 2), "K"), ("R", F(1, 2), "K2")]


def test_extended_whnfs():
    assert is_whnf(P("Cons K K2")) and is_whnf(P("let x=K in Nil"))
    assert is_whnf(P("let x=y, y=Cons K Nil in x"))
    assert not is_whnf(P("seq Bot K"))


# ---------------------------------------------------------------- transformations

def test_cpcx_in():
    e = P("let x = Cons K K2 in case x of {Nil -> K; Cons a b -> a}")
    (m,) = match_sites(e, "cpcx-in", C, True)
    expect = "let x=Cons y1 y2, y1=K, y2=K2 in case Cons y1 y2 of {Nil -> K; Cons a b -> a}"
    assert alpha_equiv(apply(e, m), P(expect))


def test_abs_introduces_shares():
    e = P("let x = Cons K K2 in x")
    (m,) = match_sites(e, "abs", C, True)
    assert alpha_equiv(apply(e, m), P("let x=Cons y1 y2, y1=K, y2=K2 in x"))


def test_abs_skips_nullary_constructors():
    assert match_sites(P("let x = Nil in x"), "abs", C, True) == []


def test_abs_reversed_by_ucp():
    e = P("let x = Cons K K2, z = Pair x x in z")
    for m in match_sites(e, "abs", C, True):
        assert alpha_equiv(undo_abs(e, m), e)


def test_extended_mode_widens_lll():
    e = P("case (let x=True in x) of {True -> K; False -> K2}")
    assert match_sites(e, "lll", C, False) == []
    assert [m.rule for m in match_sites(e, "lll", C, True)] == ["lcase"]


# ---------------------------------------------------------------- properties

def _ref_whnf(e):
    """Independent reading of the extended WHNF list."""
    if isinstance(e, (Lam, Ctor)):
        return True
    if not isinstance(e, Let):
        return False
    if isinstance(e.body, (Lam, Ctor)):
        return True
    env = dict(e.binds)
    t, seen = e.body, set()
    while isinstance(t, Var) and t.name in env and t.name not in seen:
        seen.add(t.name)
        t = env[t.name]
    return isinstance(t, Ctor) and bool(seen)


@st.composite
def ext_terms(draw, size=18):
    seed = draw(st.integers(0, 2**32 - 1))
    return Generator(GenConfig.extended(size), random.Random(seed)).term()


@settings(max_examples=300, deadline=None)
@given(ext_terms())
def test_whnf_agrees_with_reference(e):
    e = prepare(e)
    for _ in range(20):
        assert is_whnf(e) == _ref_whnf(e)
        v = sr_step(e)
        if isinstance(v, Unique):
            e = v.result
        elif hasattr(v, "left"):
            e = v.left
        else:
            break


def _saturated(e):
    if isinstance(e, Ctor) and len(e.args) != DEFAULT_TABLE.arity(e.name):
        return False
    if isinstance(e, Case) and any(len(a.vars) != DEFAULT_TABLE.arity(a.ctor) for a in e.alts):
        return False
    return all(_saturated(c) for _, c, _ in children(e))


EXT_RULES = ("case", "seq", "lcase", "lseq", "cpcx", "abs", "lll", "cp", "gc", "ucp")


@settings(max_examples=100, deadline=None)
@given(ext_terms())
def test_rules_preserve_saturation(e):
    for rule in EXT_RULES:
        for m in match_sites(e, rule, C, True):
            assert _saturated(apply(e, m))


@settings(max_examples=150, deadline=None)
@given(ext_terms())
def test_case_seq_in_reduction_position_match_sr(e):
    e = prepare(e)
    for _ in range(40):
        v = sr_step(e)
        if isinstance(v, Unique):
            if v.rule in ("case-c", "seq-c"):
                ms = match_sites(e, v.rule, R, True)
                assert any(alpha_equiv(apply(e, m), v.result) for m in ms)
            e = v.result
        elif hasattr(v, "left"):
            e = v.left
        else:
            break


@settings(max_examples=200, deadline=None)
@given(ext_terms(22))
def test_abs_then_ucp_round_trip(e):
    for m in match_sites(e, "abs", C, True):
        assert alpha_equiv(undo_abs(e, m), e)

