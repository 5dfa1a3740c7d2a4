"""Forking and commuting diagrams as data, with a bounded join search.

A fork overlap is s' <-sr- s -S,T-> t; a commuting overlap is
s -S,T-> t -sr-> t'.  A diagram closes a fork by sr steps from t and
transformation steps from s', and a commuting overlap by sr steps from s
followed by transformation steps, both ending in alpha-equal terms.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .generate import GenConfig, Generator
from .reduction import PROB_RULES, prepare, sr_step, sr_successors, is_whnf, ProbBranch, Unique
from .terms import S, Expr, alpha_equiv, fingerprint, shape
from .text import show
from .transform import RedexMatch, apply, match_sites, members, rewrite_all

MULTS = ("1", "?", "+", "*")
PLUS_CAP = 8
STATE_CAP = 400
STEP_BUDGET = 4000   # successor computations per overlap


# ---------------------------------------------------------------- labels

def family(label: str) -> str:
    """cp-in -> cp, gc-1 -> gc, probl -> probl."""
    return label.split("-")[0]


def label_matches(concrete: str, pattern: str, extended: bool = False) -> bool:
    if concrete == pattern or family(concrete) == pattern:
        return True
    if pattern == "cp" and concrete in ("cpd", "cpS"):
        return True
    if pattern in ("cpd", "cpS"):
        return False
    try:
        return concrete in members(pattern, extended)
    except ValueError:
        return False


@dataclass(frozen=True)
class Edge:
    kind: str               # "sr" or "S"
    labels: tuple           # alternatives: patterns or label variables
    mult: str = "1"

    @classmethod
    def parse(cls, kind: str, text: str) -> "Edge":
        mult = "1"
        if text[-1] in "+*?":
            text, mult = text[:-1], text[-1]
        return cls(kind, tuple(text.split("|")), mult)

    def __str__(self):
        m = "" if self.mult == "1" else "," + self.mult
        return f"{self.kind},{'|'.join(self.labels)}{m}"


@dataclass(frozen=True)
class Diagram:
    id: str
    kind: str               # "fork" or "commute"
    given_sr: Edge
    given_tr: Edge
    sr: tuple               # closing sr steps (from t in a fork, from s in a commute)
    tr: tuple               # closing transformation steps
    where: tuple = ()       # (variable, domain or None) pairs; None means any label

    @property
    def variables(self) -> dict:
        return dict(self.where)


def D(id, kind, given, sr="", tr="", **where) -> Diagram:
    """Compact constructor: given="a/lll", sr="a lll+", tr="lapp llet", a=("probl","probr")."""
    g_sr, g_tr = given.split("/")
    return Diagram(id, kind, Edge.parse("sr", g_sr), Edge.parse("S", g_tr),
                   tuple(Edge.parse("sr", x) for x in sr.split()),
                   tuple(Edge.parse("S", x) for x in tr.split()),
                   tuple(sorted((k, v) for k, v in where.items())))


@dataclass(frozen=True)
class BaseCase:
    """s -S,T-> t: forward says WHNF(s) implies WHNF(t); backward says WHNF(t)
    implies s is a WHNF or reaches one by the closing sr steps."""
    forward: bool
    backward: Optional[tuple]   # closing sr edges, None when no backward claim

    def holds(self, s: Expr, t: Expr, extended: bool = False) -> bool:
        if self.forward and is_whnf(s) and not is_whnf(t):
            return False
        if self.backward is not None and is_whnf(t) and not is_whnf(s):
            ends = _walk([(prepare(s), ())], self.backward, {}, extended,
                         [PLUS_CAP] * _plus_count(self.backward))
            return any(is_whnf(e) for e, _ in ends)
        return True


@dataclass(frozen=True)
class DiagramSet:
    name: str
    kind: str
    transformations: tuple      # rule names whose overlaps are generated
    diagrams: tuple
    base: BaseCase
    extended: bool = False


PROB = ("probl", "probr")
PCS = ("probl", "probr", "case", "seq")
_ANY = None
IFF = BaseCase(True, ())

_LLL_BASE = BaseCase(True, (Edge("sr", ("llet",), "?"),))
_CP_BASE = BaseCase(True, (Edge("sr", ("cp",), "?"),))
_UG_BASE = BaseCase(True, (Edge("sr", ("llet",), "?"), Edge("sr", ("cp",), "?")))
_CPCX_BASE = BaseCase(False, ())

SETS = {}


def _register(*sets):
    for ds in sets:
        SETS[ds.name] = ds


_register(
    DiagramSet("lll-fork", "fork", ("lll",), (
        D("lll-f1", "fork", "a/a", a=("lapp", "llet")),
        D("lll-f2", "fork", "a/lll", sr="a", tr="lll", a=_ANY),
        D("lll-f3", "fork", "a/lll", sr="a", a=PROB),
        D("lll-f4", "fork", "lapp/llet", sr="lapp", tr="lapp llet"),
    ), _LLL_BASE),
    DiagramSet("lll-commute", "commute", ("lll",), (
        D("lll-c1", "commute", "a/b", sr="a", tr="b", a=_ANY, b=("lapp", "llet")),
        D("lll-c2", "commute", "a/lll", sr="a lll", a=_ANY),
        D("lll-c3", "commute", "a/lll", sr="a", a=PROB),
        D("lll-c4", "commute", "lapp/llet", sr="lapp", tr="lapp llet"),
        D("lll-c5", "commute", "lapp/llet", sr="lapp lapp", tr="llet"),
    ), _LLL_BASE),
    DiagramSet("cp-fork", "fork", ("cpd", "cpS"), (
        D("cp-f1", "fork", "cp/cpS"),
        D("cp-f2", "fork", "a/cpS", sr="a", tr="cpS", a=_ANY),
        D("cp-f3", "fork", "a/cpS", sr="a", a=PROB),
        D("cp-f4", "fork", "a/cpd", sr="a", tr="cpd", a=_ANY),
        D("cp-f5", "fork", "lbeta/cpd", sr="lbeta", tr="cpS"),
        D("cp-f6", "fork", "a/cpd", sr="a", a=PROB),
        D("cp-f7", "fork", "cp/cpd", sr="cp", tr="cpd cpd"),
    ), _CP_BASE),
    DiagramSet("cp-commute", "commute", ("cpd", "cpS"), (
        D("cp-c1", "commute", "a/cpS", sr="a", tr="cpS", a=_ANY),
        D("cp-c2", "commute", "a/cpS", sr="a", a=PROB),
        D("cp-c3", "commute", "a/cpd", sr="a", tr="cpd", a=_ANY),
        D("cp-c4", "commute", "lbeta/cpd", sr="lbeta", tr="cpS"),
        D("cp-c5", "commute", "a/cpd", sr="a", a=PROB),
        D("cp-c6", "commute", "cp/cpd", sr="cp", tr="cpd cpd"),
        D("cp-c7", "commute", "lbeta/cpS", sr="lbeta cp"),
    ), _CP_BASE),
    DiagramSet("cpx-fork", "fork", ("cpx",), (
        D("cpx-f1", "fork", "a/cpx", sr="a", tr="cpx", a=_ANY),
        D("cpx-f2", "fork", "a/cpx", sr="a", a=("cp",) + PROB),
        D("cpx-f3", "fork", "cp/cpx", sr="cp", tr="cpx cpx"),
    ), IFF),
    DiagramSet("cpx-commute", "commute", ("cpx",), (
        D("cpx-c1", "commute", "a/cpx", sr="a", tr="cpx", a=_ANY),
        D("cpx-c2", "commute", "a/cpx", sr="a", a=("cp",) + PROB),
        D("cpx-c3", "commute", "cp/cpx", sr="cp", tr="cpx cpx"),
    ), IFF),
    DiagramSet("xch-fork", "fork", ("xch",), (
        D("xch-f1", "fork", "a/xch", sr="a", tr="xch", a=_ANY),
        D("xch-f2", "fork", "a/xch", sr="a", a=PROB),
    ), IFF),
    DiagramSet("xch-commute", "commute", ("xch",), (
        D("xch-c1", "commute", "a/xch", sr="a", tr="xch", a=_ANY),
        D("xch-c2", "commute", "a/xch", sr="a", a=PROB),
    ), IFF),
    DiagramSet("gc-ucp-fork", "fork", ("gc", "ucp"), (
        D("ug-f1", "fork", "a/b", sr="a", tr="b", a=_ANY, b=("gc", "ucp")),
        D("ug-f2", "fork", "a/gc", sr="a", a=("llet", "lapp") + PROB),
        D("ug-f3", "fork", "a/ucp", sr="a", a=PROB),
        D("ug-f4", "fork", "a/ucp", sr="a", tr="gc", a=PROB + ("cp",)),
        D("ug-f5", "fork", "cp/ucp", tr="gc"),
        D("ug-f6", "fork", "llet/ucp", sr="lll+", tr="ucp"),
        # supplements: gc deletes the let that the sr step floats
        D("ug-f2s", "fork", "a/gc", tr="gc", a=("llet", "lapp")),
        D("ug-f6s", "fork", "a/ucp", tr="ucp", a=("llet", "lapp")),
    ), _UG_BASE),
    DiagramSet("gc-ucp-commute", "commute", ("gc", "ucp"), (
        D("ug-c1", "commute", "a/b", sr="a", tr="b", a=_ANY, b=("gc", "ucp")),
        D("ug-c2", "commute", "lbeta/ucp", sr="lll+ cp lbeta", tr="gc"),
        D("ug-c3", "commute", "a/gc|ucp", sr="a", a=PROB),
        D("ug-c4", "commute", "a/ucp", sr="lll+ a", tr="ucp|gc", a=_ANY),
        D("ug-c5", "commute", "a/gc", sr="a lll+", tr="gc", a=_ANY),
        D("ug-c6", "commute", "lbeta/ucp", sr="cp lbeta", tr="gc"),
        D("ug-c7", "commute", "a/ucp", sr="a", tr="gc", a=PROB + ("cp",)),
        D("ug-c8", "commute", "lll+/ucp", sr="lll", tr="ucp"),
        D("ug-c9", "commute", "lbeta/ucp", sr="lbeta llet", tr="ucp"),
        D("ug-c10", "commute", "lll+/ucp", sr="lll lll+", tr="ucp"),
        D("ug-c11", "commute", "a/gc", sr="lll a lll", tr="gc", a=("lbeta", "cp", "lapp")),
        D("ug-c4s", "commute", "a/gc", sr="lll+ a", tr="gc", a=_ANY),
    ), _UG_BASE),
)

# extended calculus
_LACS_BASE = _LLL_BASE
_register(
    DiagramSet("lll-ext-fork", "fork", ("lll",), (
        D("xl-f1", "fork", "a/a", a=("lacs", "llet")),
        D("xl-f2", "fork", "a/b", sr="a", tr="b", a=_ANY, b=("lacs", "llet")),
        D("xl-f3", "fork", "a/b", sr="a", a=PCS, b=("lacs", "llet")),
        D("xl-f4", "fork", "lll/llet", sr="lll", tr="lacs llet"),
    ), _LACS_BASE, extended=True),
    DiagramSet("lll-ext-commute", "commute", ("lll",), (
        D("xl-c1", "commute", "a/b", sr="a", tr="b", a=_ANY, b=("lacs", "llet")),
        D("xl-c2", "commute", "a/b", sr="a", a=PCS, b=("lacs", "llet")),
        D("xl-c3", "commute", "a/b", sr="a lll", a=_ANY, b=("lacs", "llet")),
        D("xl-c4", "commute", "lll/b", sr="lll+", b=("lacs", "llet")),
        D("xl-c5", "commute", "lll/llet", sr="lll", tr="lacs llet"),
    ), _LACS_BASE, extended=True),
    DiagramSet("abs-fork", "fork", ("abs",), (
        D("abs-f1", "fork", "a/abs", sr="a", tr="abs", a=_ANY),
        D("abs-f2", "fork", "a/abs", sr="a", a=PCS),
        D("abs-f3", "fork", "case/abs", sr="case", tr="abs cpx+ xch+"),
    ), IFF, extended=True),
    DiagramSet("abs-commute", "commute", ("abs",), (
        D("abs-c1", "commute", "a/abs", sr="a", tr="abs", a=_ANY),
        D("abs-c2", "commute", "a/abs", sr="a", a=PCS),
        D("abs-c3", "commute", "case/abs", sr="case", tr="abs cpx+ xch+"),
    ), IFF, extended=True),
    DiagramSet("cpcx-fork", "fork", ("cpcx",), (
        D("cpcx-f1", "fork", "a/cpcx", sr="a", tr="cpcx", a=_ANY),
        D("cpcx-f2", "fork", "a/cpcx", sr="a", a=PCS),
        D("cpcx-f3", "fork", "a/cpcx", sr="a", tr="abs", a=PCS),
        D("cpcx-f4", "fork", "case/cpcx", sr="case", tr="cpcx|abs cpx+ xch+"),
        D("cpcx-f5", "fork", "cp/cpcx", sr="cp", tr="cpcx cpcx"),
        D("cpcx-f6", "fork", "cp/cpcx", sr="cp", tr="cpcx+ cpx+ gc"),
    ), _CPCX_BASE, extended=True),
    DiagramSet("cpcx-commute", "commute", ("cpcx",), (
        D("cpcx-c1", "commute", "a/cpcx", sr="a", tr="cpcx", a=_ANY),
        D("cpcx-c2", "commute", "a/cpcx", sr="a", a=PCS),
        D("cpcx-c3", "commute", "a/cpcx", sr="a", tr="abs", a=PCS),
        D("cpcx-c4", "commute", "case/cpcx", sr="case", tr="cpcx|abs cpx+ xch+"),
        D("cpcx-c5", "commute", "cp/cpcx", sr="cp", tr="cpcx cpcx"),
        D("cpcx-c6", "commute", "cp/cpcx", sr="cp", tr="cpcx+ cpx+ gc"),
    ), _CPCX_BASE, extended=True),
)

CORE_SETS = ("lll-fork", "lll-commute", "cp-fork", "cp-commute", "cpx-fork", "cpx-commute",
             "xch-fork", "xch-commute", "gc-ucp-fork", "gc-ucp-commute")
EXTENDED_SETS = ("lll-ext-fork", "lll-ext-commute", "abs-fork", "abs-commute",
                 "cpcx-fork", "cpcx-commute")
ALIASES = {"cpx": ("cpx-fork", "cpx-commute"), "xch": ("xch-fork", "xch-commute"),
           "gc-ucp": ("gc-ucp-fork", "gc-ucp-commute"), "lll": ("lll-fork", "lll-commute"),
           "cp": ("cp-fork", "cp-commute"), "lll-ext": ("lll-ext-fork", "lll-ext-commute"),
           "abs": ("abs-fork", "abs-commute"), "cpcx": ("cpcx-fork", "cpcx-commute")}


def resolve_sets(name: str) -> tuple:
    if name in SETS:
        return (name,)
    if name in ALIASES:
        return ALIASES[name]
    raise KeyError(f"unknown diagram set {name}")


# ---------------------------------------------------------------- search

class NoOverlap(ValueError):
    pass


@dataclass(frozen=True)
class Overlap:
    kind: str
    source: Expr
    sr_label: str
    trans: RedexMatch
    sr_result: Expr       # s' in a fork, t' in a commute
    tr_result: Expr       # t


@dataclass(frozen=True)
class MatchReport:
    overlap: Overlap
    diagram: Optional[str]
    status: str           # "closed" or "unclosed"
    join: Optional[Expr] = None
    prob_labels: tuple = ()

    def record(self, trial: int) -> str:
        return f"{trial}, {self.diagram or '-'}, {self.status}"


def _bind(concrete: str, edge: Edge, env: dict, variables: dict, extended: bool) -> Optional[dict]:
    """Match a concrete label against a given edge, extending the variable binding."""
    for lab in edge.labels:
        if lab in variables:
            if lab in env:
                if label_matches(concrete, env[lab], extended):
                    return env
                continue
            dom = variables[lab]
            if dom is None:
                return {**env, lab: concrete if concrete in PROB_RULES else family(concrete)}
            for d in dom:
                if label_matches(concrete, d, extended):
                    return {**env, lab: d}
        elif label_matches(concrete, lab, extended):
            return env
    return None


def _patterns(edge: Edge, env: dict) -> tuple:
    return tuple(env.get(lab, lab) for lab in edge.labels)


class BudgetExhausted(RuntimeError):
    pass


class _Budget:
    """Per-overlap step budget and memo of computed successors."""
    left = None
    memo = None

    @classmethod
    def spend(cls):
        if cls.left is not None:
            cls.left -= 1
            if cls.left < 0:
                raise BudgetExhausted()


def _step(e: Expr, edge: Edge, env: dict, extended: bool) -> list:
    """One step along ``edge``: [(label, result)]."""
    pats = _patterns(edge, env)
    memo = _Budget.memo
    if memo is not None:
        key = (fingerprint(e), edge.kind, tuple(pats))
        for seen, out in memo.get(key, ()):
            if alpha_equiv(seen, e):
                return out
    _Budget.spend()
    if edge.kind == "sr":
        out = [(lab, r) for lab, r in sr_successors(prepare(e))
               if any(label_matches(lab, p, extended) for p in pats)]
    else:
        out = []
        for p in pats:
            rules = (p,) if p in ("cpd", "cpS") else members(p, extended)
            for rule in rules:
                out.extend((m.rule, r) for m, r in rewrite_all(e, rule, S, extended))
    if memo is not None:
        memo.setdefault(key, []).append((e, out))
    return out


class _States:
    """States (term, prob-labels) deduplicated up to alpha-equivalence."""

    def __init__(self):
        self.buckets = {}
        self.items = []

    def add(self, e: Expr, probs: tuple) -> bool:
        key = (fingerprint(e), probs)
        bucket = self.buckets.setdefault(key, [])
        if any(alpha_equiv(e, x) for x in bucket):
            return False
        bucket.append(e)
        self.items.append((e, probs))
        return True


def _walk(starts, edges, env, extended, caps) -> list:
    """Follow ``edges`` from ``starts``; ``caps`` bounds each ``+``/``*`` edge in turn."""
    cur = starts
    caps = iter(caps)
    for edge in edges:
        lo, hi = {"1": (1, 1), "?": (0, 1)}.get(edge.mult, (0, 0))
        if edge.mult in "+*":
            lo, hi = int(edge.mult == "+"), next(caps)
        out = _States()
        if lo == 0:
            for e, ps in cur:
                out.add(e, ps)
        frontier = cur
        for n in range(1, hi + 1):
            nxt = _States()
            for e, ps in frontier:
                for lab, r in _step(e, edge, env, extended):
                    nps = ps + ((lab,) if lab in PROB_RULES else ())
                    nxt.add(r, nps)
                    if len(nxt.items) >= STATE_CAP:
                        break
            if n >= lo:
                for e, ps in nxt.items:
                    out.add(e, ps)
            frontier = nxt.items
            if not frontier:
                break
        cur = out.items
        if not cur:
            break
    return cur


def _plus_count(edges) -> int:
    return sum(e.mult in "+*" for e in edges)


def _meet(left, right):
    for a, pa in left:
        for b, pb in right:
            if pa == pb and alpha_equiv(a, b):
                return a, pa
    return None


def _try(ds: DiagramSet, d: Diagram, ov: Overlap, caps: tuple = ()):
    variables = d.variables
    env = _bind(ov.sr_label, d.given_sr, {}, variables, ds.extended)
    if env is None:
        return None
    env = _bind(ov.trans.rule, d.given_tr, env, variables, ds.extended)
    if env is None:
        return None
    caps = list(caps) or [PLUS_CAP] * _width(d)
    given_prob = (ov.sr_label,) if ov.sr_label in PROB_RULES else ()
    ext = ds.extended
    if ov.kind == "fork":
        # s' -tr-> . <-sr- t
        k = _plus_count(d.tr)
        left = _walk([(ov.sr_result, given_prob)], d.tr, env, ext, caps[:k])
        right = _walk([(ov.tr_result, ())], d.sr, env, ext, caps[k:])
    else:
        # s -sr-> . -tr-> .  versus  s -S-> t -sr-> t'
        k, m = _plus_count(d.sr), _plus_count(d.sr) + _plus_count(d.tr)
        mid = _walk([(ov.source, ())], d.sr, env, ext, caps[:k])
        left = _walk(mid, d.tr, env, ext, caps[k:m])
        right = [(ov.sr_result, given_prob)]
        if d.given_sr.mult in "+*":
            # the given sr,a,+ edge may continue past its first step
            right = _walk(right, (Edge("sr", d.given_sr.labels, "*"),), env, ext, caps[m:])
    return _meet(left, right)


_DEPTHS = (1, 2, 4, PLUS_CAP)


def _width(d: Diagram) -> int:
    """Number of unbounded edges the search has to cap."""
    return _plus_count(d.sr + d.tr) + (d.given_sr.mult in "+*")


def _caps(d: Diagram) -> dict:
    """Iterative deepening: cap vectors for the unbounded edges, grouped by level.

    Each edge is capped independently, so a long run on one edge does not
    force every other edge to the same depth.
    """
    levels = {}
    for vec in itertools.product(range(len(_DEPTHS)), repeat=_width(d)):
        levels.setdefault(sum(vec), []).append(tuple(_DEPTHS[i] for i in vec))
    return levels


def join_search(ds: DiagramSet, ov: Overlap, budget: int = STEP_BUDGET) -> MatchReport:
    _Budget.left, _Budget.memo = budget, {}
    try:
        return _join_search(ds, ov)
    except BudgetExhausted:
        return MatchReport(ov, None, "budget-exhausted")
    finally:
        _Budget.left = _Budget.memo = None


def _join_search(ds: DiagramSet, ov: Overlap) -> MatchReport:
    if ov.kind != ds.kind:
        raise ValueError(f"{ds.name} holds {ds.kind} diagrams, not {ov.kind}")
    # trivial cases first: the transformation step is the sr step, or both results agree
    if ov.kind == "fork" and alpha_equiv(ov.sr_result, ov.tr_result):
        return MatchReport(ov, "trivial", "closed", ov.tr_result)
    if ov.kind == "commute":
        for lab, r in sr_successors(prepare(ov.source)):
            if lab not in PROB_RULES and alpha_equiv(r, ov.tr_result):
                return MatchReport(ov, "trivial", "closed", ov.sr_result)
    plans = [(d, _caps(d)) for d in ds.diagrams]
    for level in range(max(max(c) for _, c in plans) + 1):
        for d, levels in plans:
            for caps in levels.get(level, ()):
                hit = _try(ds, d, ov, caps)
                if hit is not None:
                    return MatchReport(ov, d.id, "closed", hit[0], hit[1])
    return MatchReport(ov, None, "unclosed")


def fork_overlap(s: Expr, trans: RedexMatch, branch: str = "L") -> Overlap:
    s = prepare(s)
    v = sr_step(s)
    if isinstance(v, Unique):
        label, s1 = v.rule, v.result
    elif isinstance(v, ProbBranch):
        label, s1 = ("probl", v.left) if branch == "L" else ("probr", v.right)
    else:
        raise NoOverlap("no standard reduction step")
    try:
        t = apply(s, trans)
    except ValueError as exc:
        raise NoOverlap(str(exc)) from exc
    return Overlap("fork", s, label, trans, s1, t)


def commute_overlap(s: Expr, trans: RedexMatch, branch: str = "L") -> Overlap:
    s = prepare(s)
    try:
        t = prepare(apply(s, trans))
    except ValueError as exc:
        raise NoOverlap(str(exc)) from exc
    v = sr_step(t)
    if isinstance(v, Unique):
        label, t1 = v.rule, v.result
    elif isinstance(v, ProbBranch):
        label, t1 = ("probl", v.left) if branch == "L" else ("probr", v.right)
    else:
        raise NoOverlap("no standard reduction step after the transformation")
    return Overlap("commute", s, label, trans, t1, t)


def fork_join_search(s: Expr, trans: RedexMatch, ds: DiagramSet, branch: str = "L") -> MatchReport:
    return join_search(ds, fork_overlap(s, trans, branch))


def commute_join_search(s: Expr, trans: RedexMatch, ds: DiagramSet, branch: str = "L") -> MatchReport:
    return join_search(ds, commute_overlap(s, trans, branch))


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    set_name: str
    seed: int
    reports: list = field(default_factory=list)
    base_failures: list = field(default_factory=list)

    @property
    def unclosed(self) -> list:
        return [r for r in self.reports if r.status != "closed"]

    @property
    def prob_mismatch(self) -> list:
        # joins require equal prob labels, so closed reports never mismatch
        return []

    def records(self) -> list:
        return [r.record(i) for i, r in enumerate(self.reports)]

    def histogram(self) -> dict:
        out = {}
        for r in self.reports:
            out[r.diagram or "-"] = out.get(r.diagram or "-", 0) + 1
        return out


def _gen_config(ds: DiagramSet, size: int) -> GenConfig:
    if ds.extended:
        return GenConfig.extended(size)
    if ds.transformations in (("cpx",), ("xch",)):
        return GenConfig.let_rich(size)
    return GenConfig(size=size)


def random_overlaps(ds: DiagramSet, n: int, seed: int = 0, size: int = 14,
                    max_attempts: int = 2000):
    """Seeded concrete overlaps for the set, each with a transformation site of class S."""
    rng = random.Random(seed)
    gen = Generator(_gen_config(ds, size), rng)
    made = 0
    while made < n:
        for _ in range(max_attempts):
            s = gen.term()
            ms = [m for rule in ds.transformations for m in match_sites(s, rule, S, ds.extended)]
            if not ms:
                continue
            m = rng.choice(ms)
            branch = rng.choice("LR")
            try:
                ov = (fork_overlap if ds.kind == "fork" else commute_overlap)(s, m, branch)
            except NoOverlap:
                continue
            yield ov
            made += 1
            break
        else:
            return


def validate_set(name: str, n: int = 200, seed: int = 0, size: int = 14) -> ValidationReport:
    ds = SETS[name]
    rep = ValidationReport(name, seed)
    for ov in random_overlaps(ds, n, seed, size):
        rep.reports.append(join_search(ds, ov))
        if not ds.base.holds(ov.source, ov.tr_result, ds.extended):
            rep.base_failures.append(ov)
    return rep


def describe(d: Diagram) -> str:
    where = "; ".join(f"{k} in {{{', '.join(v)}}}" for k, v in d.where if v)
    parts = [f"{d.id}: given {d.given_sr} / {d.given_tr}",
             "sr " + " ".join(map(str, d.sr)) if d.sr else "sr -",
             "tr " + " ".join(map(str, d.tr)) if d.tr else "tr -"]
    return ", ".join(parts) + (f" ({where})" if where else "")
