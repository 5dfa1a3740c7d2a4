"""Standard reduction: one step, deterministic runs and replays.

The needed redex is found by walking the application spine of the let body
and then following variable bindings of the top-level let.  A binding chain
that revisits a variable is a blackhole, which is stuck.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import (Alt, App, Case, Choice, Ctor, Expr, Hole, Lam, Let, Name, NameSupply,
                    Seq, Var, _app_head, all_names, freshen, has_distinct_binders, mk_let,
                    replace, subterm)

PROB_RULES = ("probl", "probr")
CORE_RULES = ("lbeta", "cp-in", "cp-e", "llet-in", "llet-e", "lapp", "probl", "probr")
EXT_RULES = ("case-c", "case-in", "case-e", "lcase", "seq-c", "seq-in", "seq-e", "lseq")

OPEN = "open-variable"
BLACKHOLE = "blackhole"
ILL_TYPED = "ill-typed"


@dataclass(frozen=True)
class Whnf:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str


@dataclass(frozen=True)
class Unique:
    rule: str
    result: Expr


@dataclass(frozen=True)
class ProbBranch:
    redex: tuple
    left: Expr
    right: Expr


StepVerdict = Union[Whnf, Stuck, Unique, ProbBranch]


def prepare(e: Expr) -> Expr:
    """Bring a term into the distinct variable convention."""
    return e if has_distinct_binders(e) else freshen(e)


def is_whnf(e: Expr) -> bool:
    if isinstance(e, (Lam, Ctor)):
        return True
    if not isinstance(e, Let):
        return False
    if isinstance(e.body, (Lam, Ctor)):
        return True
    # let {x_i = x_{i+1}}, x_m = c s.., env in x_1
    seen = set()
    t = e.body
    while isinstance(t, Var) and t.name not in seen:
        seen.add(t.name)
        t = e.lookup(t.name)
        if isinstance(t, Ctor):
            return True
    return False


def sr_step(e: Expr) -> StepVerdict:
    if isinstance(e, Let):
        top, root = e, ("body",)
    else:
        top, root = None, ()
    focus = subterm(e, root)
    head, apath = _app_head(focus)
    hpath = root + apath
    if isinstance(head, Var):
        if top is None or top.lookup(head.name) is None:
            return Stuck(OPEN)
        return _chain(e, top, head.name, hpath)
    if isinstance(head, Hole):
        return Stuck(OPEN)
    return _local(e, top, root, hpath, head)


def _local(e: Expr, top: Optional[Let], root, hpath, head: Expr) -> StepVerdict:
    """A redex whose head is not a variable, inside the A-context rooted at ``root``."""
    if isinstance(head, Choice):
        return ProbBranch(hpath, replace(e, hpath, head.left), replace(e, hpath, head.right))
    if len(hpath) == len(root):
        # no surrounding application, case or seq
        if isinstance(head, (Lam, Ctor)):
            return Whnf()
        if isinstance(head, Let):
            # only reachable as the body of the top-level let
            return Unique("llet-in", Let(top.binds + head.binds, head.body))
        raise AssertionError(head)
    ppath = hpath[:-1]
    parent = subterm(e, ppath)
    if isinstance(head, Lam):
        if isinstance(parent, App):
            return Unique("lbeta", replace(e, ppath, Let(((head.var, parent.arg),), head.body)))
        if isinstance(parent, Seq):
            return Unique("seq-c", replace(e, ppath, parent.second))
        return Stuck(ILL_TYPED)
    if isinstance(head, Let):
        if isinstance(parent, App):
            return Unique("lapp", replace(e, ppath, Let(head.binds, App(head.body, parent.arg))))
        if isinstance(parent, Seq):
            return Unique("lseq", replace(e, ppath, Let(head.binds, Seq(head.body, parent.second))))
        if isinstance(parent, Case):
            return Unique("lcase", replace(e, ppath, Let(head.binds, Case(parent.type, head.body, parent.alts))))
    if isinstance(head, Ctor):
        if isinstance(parent, Seq):
            return Unique("seq-c", replace(e, ppath, parent.second))
        if isinstance(parent, Case):
            alt = _alt_for(parent, head.name)
            if alt is None or len(alt.vars) != len(head.args):
                return Stuck(ILL_TYPED)
            return Unique("case-c", replace(e, ppath, mk_let(zip(alt.vars, head.args), alt.body)))
        return Stuck(ILL_TYPED)
    raise AssertionError((head, parent))


def _alt_for(case: Case, ctor: str) -> Optional[Alt]:
    for a in case.alts:
        if a.ctor == ctor:
            return a
    return None


def _chain(e: Let, top: Let, x1: Name, occ_path) -> StepVerdict:
    """Follow the needed binding chain starting at the occurrence of x1 at occ_path."""
    target, in_body = occ_path, True
    visited = {x1}
    cur = x1
    while True:
        rhs = top.lookup(cur)
        head, apath = _app_head(rhs)
        hpath = (cur,) + apath
        if isinstance(head, Var):
            y = head.name
            if top.lookup(y) is None:
                return Stuck(OPEN)
            if y in visited:
                return Stuck(BLACKHOLE)
            if apath:
                target, in_body = hpath, False
            visited.add(y)
            cur = y
            continue
        if isinstance(head, Hole):
            return Stuck(OPEN)
        if apath or isinstance(head, Choice):
            return _local(e, top, (cur,), hpath, head)
        suffix = "-in" if in_body else "-e"
        if isinstance(head, Lam):
            copy = freshen(head, all_names(e))
            return Unique("cp" + suffix, replace(e, target, copy))
        if isinstance(head, Let):
            binds = []
            for x, s in top.binds:
                binds.append((x, head.body if x == cur else s))
                if x == cur:
                    binds.extend(head.binds)
            return Unique("llet-e", Let(tuple(binds), top.body))
        if isinstance(head, Ctor):
            if in_body and len(target) == 1:
                return Whnf()
            ppath = target[:-1]
            parent = subterm(e, ppath)
            if isinstance(parent, Seq):
                return Unique("seq" + suffix, replace(e, ppath, parent.second))
            if isinstance(parent, Case):
                alt = _alt_for(parent, head.name)
                if alt is None or len(alt.vars) != len(head.args):
                    return Stuck(ILL_TYPED)
                supply = NameSupply(all_names(e))
                ws = [supply.fresh(y.base) for y in alt.vars]
                e2 = replace(e, ppath, mk_let(zip(alt.vars, (Var(w) for w in ws)), alt.body))
                binds = []
                for x, s in e2.binds:
                    if x == cur:
                        binds.append((x, Ctor(head.name, tuple(Var(w) for w in ws))))
                        binds.extend(zip(ws, head.args))
                    else:
                        binds.append((x, s))
                return Unique("case" + suffix, Let(tuple(binds), e2.body))
            return Stuck(ILL_TYPED)
        raise AssertionError(head)


# ---------------------------------------------------------------- runs

@dataclass(frozen=True)
class ReachedWhnf:
    expr: Expr
    trace: tuple


@dataclass(frozen=True)
class ReachedStuck:
    expr: Expr
    reason: str
    trace: tuple


@dataclass(frozen=True)
class FuelExhausted:
    expr: Expr
    trace: tuple


@dataclass(frozen=True)
class AtProb:
    expr: Expr
    redex: tuple
    left: Expr
    right: Expr
    trace: tuple


@dataclass(frozen=True)
class ChoicesExhausted:
    expr: Expr
    trace: tuple


DetOutcome = Union[ReachedWhnf, ReachedStuck, FuelExhausted, AtProb]


def run_until_prob(e: Expr, fuel: int) -> DetOutcome:
    """Apply deterministic steps until WHNF, stuck, a prob redex or fuel runs out."""
    trace = []
    while True:
        verdict = sr_step(e)
        if isinstance(verdict, Whnf):
            return ReachedWhnf(e, tuple(trace))
        if isinstance(verdict, Stuck):
            return ReachedStuck(e, verdict.reason, tuple(trace))
        if isinstance(verdict, ProbBranch):
            return AtProb(e, verdict.redex, verdict.left, verdict.right, tuple(trace))
        if len(trace) >= fuel:
            return FuelExhausted(e, tuple(trace))
        trace.append(verdict.rule)
        e = verdict.result


@dataclass(frozen=True)
class Replay:
    outcome: object
    consumed: str
    trace: tuple  # all rule labels including probl/probr


def reduce_trace(e: Expr, choices: str, fuel: int) -> Replay:
    """Replay an evaluation, resolving each prob redex by the next letter of ``choices``."""
    e = prepare(e)
    trace, used = [], 0
    while True:
        out = run_until_prob(e, fuel - _det_count(trace))
        trace.extend(out.trace)
        if not isinstance(out, AtProb):
            return Replay(_retrace(out, trace), choices[:used], tuple(trace))
        if used >= len(choices):
            return Replay(ChoicesExhausted(out.expr, tuple(trace)), choices[:used], tuple(trace))
        c = choices[used]
        used += 1
        if c == "L":
            trace.append("probl")
            e = out.left
        elif c == "R":
            trace.append("probr")
            e = out.right
        else:
            raise ValueError(f"choice must be L or R, got {c!r}")


def _det_count(trace) -> int:
    return sum(1 for r in trace if r not in PROB_RULES)


def _retrace(out, trace):
    if isinstance(out, ReachedWhnf):
        return ReachedWhnf(out.expr, tuple(trace))
    if isinstance(out, ReachedStuck):
        return ReachedStuck(out.expr, out.reason, tuple(trace))
    return FuelExhausted(out.expr, tuple(trace))


def sr_successors(e: Expr) -> list:
    """All (label, successor) pairs of one standard step."""
    v = sr_step(e)
    if isinstance(v, Unique):
        return [(v.rule, v.result)]
    if isinstance(v, ProbBranch):
        return [("probl", v.left), ("probr", v.right)]
    return []
