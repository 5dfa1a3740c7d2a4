import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probneed.generate import GenConfig, Generator
from probneed.terms import C, R, S, Name, alpha_equiv, free_vars, has_distinct_binders
from probneed.text import parse, show
from probneed.transform import (CORE_UNIONS, RULES, StaleMatch, UnknownRule, apply, lm_measure,
                                lmp_measure, match_sites, members, transformation_metadata)

CORE_RULES = sorted(set(CORE_UNIONS) | {r for r in RULES if r not in
                    {"seq-c", "seq-in", "seq-e", "case-c", "case-in", "case-e", "lcase", "lseq",
                     "cpcx-in", "cpcx-e", "abs"}})


def P(src):
    return parse(src)


def results(src, rule, cls=C):
    e = P(src)
    return [(m, apply(e, m)) for m in match_sites(e, rule, cls)]


def test_probid_alpha_equal_arguments():
    ((m, r),) = results("K <+> K", "probid")
    assert m.site == () and alpha_equiv(r, P("K"))
    assert results("K <+> K2", "probid") == []


def test_gc1_drops_unused_binding():
    ((m, r),) = results(r"let x=K in \y.y", "gc-1")
    assert m.witness == (Name("x"),) and alpha_equiv(r, P(r"\y.y"))


def test_gc1_keeps_referenced_bindings():
    rs = [show(r) for _, r in results(r"let x=K, y=x, z=K2 in \w.z", "gc-1")]
    assert sorted(rs) == sorted([r"let x=\x.\y.x, z=\x.\y.y in \w.z",
                                 r"let z=\x.\y.y in \w.z"])


def test_ucp3_single_surface_occurrence():
    ((m, r),) = results("let x=K in x", "ucp-3")
    assert alpha_equiv(r, P("K"))


def test_probcomm():
    ((_, r),) = results("a <+> b", "probcomm")
    assert show(r) == "b <+> a"


def test_probdistr():
    ((_, r),) = results("r <+> (s <+> t)", "probdistr")
    assert show(r) == "(r <+> s) <+> (r <+> t)"


def test_probdistr_freshens_duplicate():
    ((_, r),) = results(r"(\x.x) <+> (s <+> t)", "probdistr")
    assert has_distinct_binders(r)


def test_xch():
    ((_, r),) = results("let x=y, y=K in x", "xch")
    assert alpha_equiv(r, P("let x=K, y=x in x"))


def test_cpd_and_cps_partition_cp():
    src = r"let x=\p.p in x (\q.x)"
    cp = {m.witness for m, _ in results(src, "cp")}
    cpd = {m.witness for m, _ in results(src, "cpd")}
    cps = {m.witness for m, _ in results(src, "cpS")}
    assert cpd | cps == cp and not cpd & cps
    assert {w[2] for w in cpd} == {(1, 0)} and {w[2] for w in cps} == {(0,)}


def test_stale_match_rejected():
    e = P("a <+> b")
    (m,) = match_sites(e, "probcomm")
    with pytest.raises(StaleMatch):
        apply(P("a"), m)


def test_unknown_rule():
    with pytest.raises(UnknownRule):
        members("nope")


def test_unions_resolve_to_members():
    assert members("lll") == ("llet-in", "llet-e", "lapp")
    assert members("lll", extended=True) == ("llet-in", "llet-e", "lapp", "lcase", "lseq")
    assert {m.rule for m, _ in results("let x = (let y = K in y) in x", "llet")} == {"llet-e"}


def test_lm_measure_base_cases():
    assert lm_measure(P("x")) == 1
    assert lm_measure(P(r"\x.x")) == 2
    assert lm_measure(P("x y")) == 3
    assert lm_measure(P("let x=y in x")) == 2 * 1 + 1


def test_lmp_measure_examples():
    assert lmp_measure(P("let x=K in x")) == (1, 2 * 3 + 1)
    assert lmp_measure(P("K")) == (0, 3)


def test_lapp_strictly_decreases_lm():
    e = P("(let x=K in x) y")
    ((_, r),) = [(m, apply(e, m)) for m in match_sites(e, "lapp")]
    assert lmp_measure(r)[0] == lmp_measure(e)[0]
    assert lmp_measure(r)[1] < lmp_measure(e)[1]


def test_metadata_table():
    assert transformation_metadata("probassoc").correct == "no"
    assert transformation_metadata("probreorder").correct == "yes"
    md = transformation_metadata("lbeta")
    assert md.correct == "yes" and md.preserves_prob_sequences


# ---------------------------------------------------------------- properties

@st.composite
def terms(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    cfg = draw(st.sampled_from([GenConfig(size=22), GenConfig.choice_rich(22),
                                GenConfig.let_rich(22)]))
    return Generator(cfg, random.Random(seed)).term()


@settings(max_examples=60, deadline=None)
@given(terms())
def test_closure_monotone_and_scope_safe(e):
    for rule in CORE_RULES:
        in_c = match_sites(e, rule, C)
        in_s = match_sites(e, rule, S)
        in_r = match_sites(e, rule, R)
        assert set(in_r) <= set(in_s) <= set(in_c)
        for m in in_c:
            r = apply(e, m)
            assert free_vars(r) <= free_vars(e)


@settings(max_examples=100, deadline=None)
@given(terms(), st.integers(0, 2**32 - 1))
def test_lll_chains_decrease_lmp(e, seed):
    rng = random.Random(seed)
    for _ in range(200):
        ms = match_sites(e, "lll", C)
        if not ms:
            break
        r = apply(e, rng.choice(ms))
        assert lmp_measure(r) < lmp_measure(e)
        e = r
    else:
        pytest.fail("lll chain did not terminate within 200 steps")


@settings(max_examples=100, deadline=None)
@given(terms())
def test_probcomm_involution_and_probid(e):
    for m in match_sites(e, "probcomm", C):
        once = apply(e, m)
        (back,) = [n for n in match_sites(once, "probcomm", C) if n.site == m.site]
        assert alpha_equiv(apply(once, back), e)
    for m in match_sites(e, "probid", C):
        from probneed.terms import subterm
        u = subterm(e, m.site)
        assert alpha_equiv(u.left, u.right)
