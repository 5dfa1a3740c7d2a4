import pytest

from probneed.diagrams import (CORE_SETS, EXTENDED_SETS, SETS, Edge, NoOverlap, commute_join_search,
                               commute_overlap, describe, fork_join_search, fork_overlap,
                               label_matches, resolve_sets, validate_set)
from probneed.terms import S
from probneed.text import parse, show
from probneed.transform import match_sites


def reports(src, rule, set_name, branch="L", extended=False):
    e = parse(src)
    ds = SETS[set_name]
    search = fork_join_search if ds.kind == "fork" else commute_join_search
    return {m.rule: search(e, m, ds, branch) for m in match_sites(e, rule, S, extended)}


def test_label_matching():
    assert label_matches("cp-in", "cp") and label_matches("cpd", "cp")
    assert label_matches("lapp", "lll") and label_matches("llet-e", "llet")
    assert not label_matches("cp-in", "cpd")
    assert not label_matches("lcase", "lll")
    assert label_matches("lcase", "lll", extended=True)


def test_edge_parse_and_print():
    e = Edge.parse("sr", "lll+")
    assert e == Edge("sr", ("lll",), "+") and str(e) == "sr,lll,+"
    assert Edge.parse("S", "cpcx|abs").labels == ("cpcx", "abs")


def test_describe():
    assert describe(SETS["lll-fork"].diagrams[3]) == \
        "lll-f4: given sr,lapp / S,llet, sr sr,lapp, tr S,lapp S,llet"


def test_resolve_sets():
    assert resolve_sets("cpx") == ("cpx-fork", "cpx-commute")
    assert resolve_sets("cp-fork") == ("cp-fork",)
    with pytest.raises(KeyError):
        resolve_sets("nope")


def test_equal_steps_close_trivially():
    r = reports(r"(let x=K in \y.y) K2", "lll", "lll-fork")["lapp"]
    assert r.diagram == "trivial" and r.status == "closed"


def test_prob_branch_absorbs_cps():
    r = reports("let x = K in (K2 <+> x)", "cpS", "cp-fork", "L")["cpS"]
    assert r.diagram == "cp-f3" and r.prob_labels == ("probl",)
    r = reports("let x = K in (K2 <+> x)", "cpS", "cp-fork", "R")["cpS"]
    assert r.diagram == "cp-f2" and r.prob_labels == ("probr",)


def test_lapp_llet_square():
    r = reports("(let x=K in (let y=K2 in y)) id", "llet", "lll-fork")["llet-in"]
    assert r.overlap.sr_label == "lapp" and r.diagram == "lll-f4"
    assert show(r.join, short=True) == "let x=K, y#1=K2 in y#1 id"


def test_commuting_lll_then_other_step():
    r = reports(r"(let x = (let y = K in y) in x) K2", "lll", "lll-commute")["llet-e"]
    assert r.overlap.sr_label == "lapp" and r.diagram == "lll-c1"


def test_ucp_then_lbeta_needs_long_sr_column():
    r = reports(r"(let x=\z.z in x) K", "ucp", "gc-ucp-commute")["ucp-3"]
    assert r.overlap.sr_label == "lbeta" and r.diagram == "ug-c2"


def test_commuting_trivial_case():
    r = reports(r"(let x=K in \y.y) K2", "lll", "lll-commute")["lapp"]
    assert r.diagram == "trivial"


def test_no_overlap_on_whnf():
    e = parse(r"let x=K in \y.x")
    (m,) = match_sites(e, "cp", S)
    with pytest.raises(NoOverlap):
        fork_overlap(e, m)
    with pytest.raises(NoOverlap):
        commute_overlap(e, m)


def test_set_kind_mismatch_rejected():
    e = parse("let x=K in x K2")
    (m, *_) = match_sites(e, "cp", S)
    with pytest.raises(ValueError):
        fork_join_search(e, m, SETS["cp-commute"])


@pytest.mark.parametrize("name", CORE_SETS)
def test_core_sets_close_small_samples(name):
    rep = validate_set(name, n=25, seed=7)
    assert len(rep.reports) == 25
    assert not rep.unclosed and not rep.base_failures
    assert all(r.record(i).startswith(f"{i}, ") for i, r in enumerate(rep.reports))


@pytest.mark.parametrize("name", EXTENDED_SETS)
def test_extended_sets_close_small_samples(name):
    rep = validate_set(name, n=10, seed=7)
    assert not rep.unclosed and not rep.base_failures


def test_joins_carry_equal_prob_labels():
    for name in ("cp-fork", "lll-commute"):
        rep = validate_set(name, n=40, seed=3)
        probs = [r for r in rep.reports if r.overlap.sr_label in ("probl", "probr")]
        for r in probs:
            assert r.diagram == "trivial" or r.prob_labels
