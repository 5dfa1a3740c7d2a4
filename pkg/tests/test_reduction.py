import random

from hypothesis import given, settings
from hypothesis import strategies as st

from probneed.convergence import SUCCESS, explore
from probneed.generate import GenConfig, Generator
from probneed.reduction import (BLACKHOLE, OPEN, AtProb, FuelExhausted, ProbBranch, ReachedWhnf,
                                Stuck, Unique, Whnf, is_whnf, prepare, reduce_trace,
                                run_until_prob, sr_step)
from probneed.terms import (Choice, alpha_equiv, has_distinct_binders, replace, subterm)
from probneed.text import parse, show

PROJ = [rf"(\p1 p2 p3 p4.p{i})" for i in range(1, 5)]
SHARING = "let z = K <+> K2 in z (z {0} {1}) (z {2} {3})".format(*PROJ)


def P(src):
    return parse(src)


def test_is_whnf_examples():
    assert is_whnf(P(r"\x.x"))
    assert is_whnf(P(r"let x=K in \y.y"))
    assert not is_whnf(P("let x = x in x"))


def test_lbeta_step():
    v = sr_step(P(r"(\x.x) K"))
    assert isinstance(v, Unique) and v.rule == "lbeta"
    assert alpha_equiv(v.result, P(r"let x=K in x"))


def test_prob_branch_at_root():
    v = sr_step(P("K <+> K2"))
    assert isinstance(v, ProbBranch) and v.redex == ()
    assert v.left == P("K") and v.right == P("K2")


def test_blackhole():
    v = sr_step(P("let x = x in x"))
    assert isinstance(v, Stuck) and v.reason == BLACKHOLE


def test_open_variable():
    v = sr_step(P("x K"))
    assert isinstance(v, Stuck) and v.reason == OPEN


def test_run_until_whnf():
    out = run_until_prob(P(r"(\x.x) (\y.y)"), 10)
    assert isinstance(out, ReachedWhnf)
    assert out.trace == ("lbeta", "cp-in")
    assert show(out.expr) == r"let x=\y.y in \y#1.y#1"


def test_omega_exhausts_fuel():
    assert isinstance(run_until_prob(P("Omega"), 50), FuelExhausted)


def test_needed_choice_comes_first():
    out = run_until_prob(P("let z = K <+> K2 in z"), 10)
    assert isinstance(out, AtProb) and out.trace == ()
    assert alpha_equiv(out.left, P("let z = K in z"))
    assert alpha_equiv(out.right, P("let z = K2 in z"))


def test_replay_sharing_example():
    left = reduce_trace(P(SHARING), "L", 200)
    right = reduce_trace(P(SHARING), "R", 200)
    assert isinstance(left.outcome, ReachedWhnf) and isinstance(right.outcome, ReachedWhnf)
    assert alpha_equiv(left.outcome.expr.body, P(PROJ[0]))
    assert alpha_equiv(right.outcome.expr.body, P(PROJ[3]))


def test_replay_without_choices():
    out = reduce_trace(P("K"), "", 10).outcome
    assert isinstance(out, ReachedWhnf) and out.trace == ()


@st.composite
def terms(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    cfg = draw(st.sampled_from([GenConfig(size=25), GenConfig.choice_rich(25),
                                GenConfig.extended(25)]))
    return Generator(cfg, random.Random(seed)).term()


@settings(max_examples=200, deadline=None)
@given(terms())
def test_step_properties(e):
    e = prepare(e)
    for _ in range(30):
        v = sr_step(e)
        # WHNFs are exactly the sr-normal successes
        assert isinstance(v, Whnf) == is_whnf(e)
        assert sr_step(e) == v   # deterministic
        if isinstance(v, ProbBranch):
            redex = subterm(e, v.redex)
            assert isinstance(redex, Choice)
            assert alpha_equiv(v.left, replace(e, v.redex, redex.left))
            assert alpha_equiv(v.right, replace(e, v.redex, redex.right))
            e = v.left
        elif isinstance(v, Unique):
            assert has_distinct_binders(v.result)
            e = v.result
        else:
            break


@settings(max_examples=100, deadline=None)
@given(terms())
def test_replay_reproduces_every_success_leaf(e):
    tree = explore(e, 3, 300)
    words = [l.probseq for l in tree.leaves()]
    assert len(words) == len(set(words))
    for leaf in tree.leaves():
        if leaf.kind == SUCCESS:
            out = reduce_trace(e, leaf.probseq, 300).outcome
            assert isinstance(out, ReachedWhnf)
            assert alpha_equiv(out.expr, leaf.expr)
