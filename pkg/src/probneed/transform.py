"""Program transformations: matching, application, metadata and the lll measure.

Each rule is a function from a subterm to a list of (witness, result) pairs.
A match records the site and the witness; applying a match re-runs the rule
at the site and picks the result with the same witness.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .terms import (A, C, R, S, App, Case, Choice, Ctor, Expr, Lam, Let, Name, NameSupply,
                    Seq, Var, _under_lambda, all_names, alpha_equiv, children,
                    classify_position, count_lets, free_vars, freshen, mk_let, occurrences,
                    positions, rename_free, replace, subterm)

CLASSES = (A, R, S, C)


class StaleMatch(ValueError):
    pass


class UnknownRule(ValueError):
    pass


@dataclass(frozen=True)
class RedexMatch:
    rule: str
    site: tuple
    witness: tuple = ()


# ---------------------------------------------------------------- helpers

def _drop_captures(let: Let, fvs) -> Let:
    """Rename let-bound names of ``let`` that clash with ``fvs``."""
    clash = {x for x, _ in let.binds} & set(fvs)
    if not clash:
        return let
    supply = NameSupply(all_names(let) | set(fvs))
    ren = {x: supply.fresh(x.base) for x in sorted(clash)}
    return Let(tuple((ren.get(x, x), rename_free(s, ren)) for x, s in let.binds),
               rename_free(let.body, ren))


def _captured(ctx: Expr, path, fvs) -> bool:
    """Would a term with free variables ``fvs`` be captured at ``path`` in ``ctx``?"""
    fvs = set(fvs)
    e = ctx
    for sel in path:
        for s, c, bound in children(e):
            if s == sel:
                if fvs & set(bound):
                    return True
                e = c
                break
    return False


def _surface(e: Expr, path) -> bool:
    return not _under_lambda(e, path)


def _copy(t: Expr, avoid) -> Expr:
    return freshen(t, avoid)


def _occ_in(e: Expr, x: Name) -> int:
    return len(occurrences(e, x))


def _set_bind(let: Let, x: Name, rhs: Expr) -> tuple:
    return tuple((y, rhs if y == x else s) for y, s in let.binds)


def _without(let: Let, *xs) -> tuple:
    return tuple((y, s) for y, s in let.binds if y not in xs)


def _insert_after(binds: tuple, x: Name, extra) -> tuple:
    out = []
    for y, s in binds:
        out.append((y, s))
        if y == x:
            out.extend(extra)
    return tuple(out)


# ---------------------------------------------------------------- core rules

def r_lbeta(u):
    if isinstance(u, App) and isinstance(u.fun, Lam):
        lam = u.fun
        x, body = lam.var, lam.body
        if x in free_vars(u.arg):
            x2 = NameSupply(all_names(u)).fresh(x.base)
            body = rename_free(body, {x: x2})
            x = x2
        return [((), Let(((x, u.arg),), body))]
    return []


def r_lapp(u):
    if isinstance(u, App) and isinstance(u.fun, Let):
        let = _drop_captures(u.fun, free_vars(u.arg))
        return [((), Let(let.binds, App(let.body, u.arg)))]
    return []


def r_lcase(u):
    if isinstance(u, Case) and isinstance(u.scrut, Let):
        fv = set().union(*(free_vars(a.body) - set(a.vars) for a in u.alts))
        let = _drop_captures(u.scrut, fv)
        return [((), Let(let.binds, Case(u.type, let.body, u.alts)))]
    return []


def r_lseq(u):
    if isinstance(u, Seq) and isinstance(u.first, Let):
        let = _drop_captures(u.first, free_vars(u.second))
        return [((), Let(let.binds, Seq(let.body, u.second)))]
    return []


def r_llet_in(u):
    if isinstance(u, Let) and isinstance(u.body, Let):
        outer = {x for x, _ in u.binds}
        fv_outer = set().union(*(free_vars(s) for _, s in u.binds)) | outer
        inner = _drop_captures(u.body, fv_outer)
        return [((), Let(u.binds + inner.binds, inner.body))]
    return []


def r_llet_e(u):
    out = []
    if isinstance(u, Let):
        for x, s in u.binds:
            if isinstance(s, Let):
                rest = Let(_without(u, x), u.body)
                inner = _drop_captures(s, free_vars(rest) | {y for y, _ in u.binds})
                binds = _insert_after(_set_bind(u, x, inner.body), x, inner.binds)
                out.append(((x,), Let(binds, u.body)))
    return out


def _cp(u, want):
    """cp-in / cp-e; ``want`` is None, True (S-target only) or False (non-S only)."""
    out = []
    if not isinstance(u, Let):
        return out
    avoid = all_names(u)
    for y, lam in u.binds:
        if not isinstance(lam, Lam):
            continue
        for q in occurrences(u.body, y):
            if want is None or _surface(u.body, q) == want:
                out.append((("in", y, q), Let(u.binds, replace(u.body, q, _copy(lam, avoid)))))
        for x, s in u.binds:
            if x == y:
                continue
            for q in occurrences(s, y):
                if want is None or _surface(s, q) == want:
                    out.append((("e", y, x, q), Let(_set_bind(u, x, replace(s, q, _copy(lam, avoid))), u.body)))
    return out


def r_cp_in(u):
    return [(w, r) for w, r in _cp(u, None) if w[0] == "in"]


def r_cp_e(u):
    return [(w, r) for w, r in _cp(u, None) if w[0] == "e"]


def r_cpd(u):
    return _cp(u, False)


def r_cps(u):
    return _cp(u, True)


def _cpx(u, kind):
    out = []
    if not isinstance(u, Let):
        return out
    for x, rhs in u.binds:
        if not isinstance(rhs, Var) or rhs.name == x:
            continue
        y = rhs.name
        if kind == "in":
            for q in occurrences(u.body, x):
                if not _captured(u.body, q, {y}):
                    out.append(((x, q), Let(u.binds, replace(u.body, q, Var(y)))))
        else:
            for z, s in u.binds:
                if z == x:
                    continue
                for q in occurrences(s, x):
                    if not _captured(s, q, {y}):
                        out.append(((x, z, q), Let(_set_bind(u, z, replace(s, q, Var(y))), u.body)))
    return out


def r_cpx_in(u):
    return _cpx(u, "in")


def r_cpx_e(u):
    return _cpx(u, "e")


def r_xch(u):
    out = []
    if not isinstance(u, Let):
        return out
    for x, rhs in u.binds:
        if isinstance(rhs, Var) and rhs.name != x and u.lookup(rhs.name) is not None:
            y = rhs.name
            s = u.lookup(y)
            binds = tuple((z, s if z == x else Var(x) if z == y else t) for z, t in u.binds)
            out.append(((x, y), Let(binds, u.body)))
    return out


def _single_surface_occ(e: Expr, x: Name):
    occ = occurrences(e, x)
    if len(occ) == 1 and _surface(e, occ[0]):
        return occ[0]
    return None


def r_ucp_1(u):
    out = []
    if not isinstance(u, Let) or len(u.binds) < 2:
        return out
    for x, t in u.binds:
        rest = _without(u, x)
        if x in free_vars(t) or any(x in free_vars(s) for _, s in rest):
            continue
        q = _single_surface_occ(u.body, x)
        if q is not None and not _captured(u.body, q, free_vars(t)):
            out.append(((x,), Let(rest, replace(u.body, q, t))))
    return out


def r_ucp_2(u):
    out = []
    if not isinstance(u, Let):
        return out
    for x, t in u.binds:
        if x in free_vars(t) or x in free_vars(u.body):
            continue
        for y, s in u.binds:
            if y == x:
                continue
            others = [r for z, r in u.binds if z not in (x, y)]
            if any(x in free_vars(r) for r in others):
                continue
            q = _single_surface_occ(s, x)
            if q is not None and not _captured(s, q, free_vars(t)):
                binds = tuple((z, replace(s, q, t) if z == y else r) for z, r in u.binds if z != x)
                out.append(((x, y), Let(binds, u.body)))
    return out


def r_ucp_3(u):
    if isinstance(u, Let) and len(u.binds) == 1:
        (x, t), = u.binds
        if x not in free_vars(t):
            q = _single_surface_occ(u.body, x)
            if q is not None and not _captured(u.body, q, free_vars(t)):
                return [((x,), replace(u.body, q, t))]
    return []


def _reachable(u: Let) -> set:
    todo = list(free_vars(u.body))
    seen = set()
    while todo:
        x = todo.pop()
        if x in seen or u.lookup(x) is None:
            continue
        seen.add(x)
        todo.extend(free_vars(u.lookup(x)))
    return seen


GC_SUBSET_LIMIT = 8


def r_gc_1(u):
    """Drop env2 from ``let env1, env2 in s`` when nothing outside env2 refers to it."""
    out = []
    if not isinstance(u, Let):
        return out
    names = [x for x, _ in u.binds]
    garbage = [x for x in names if x not in _reachable(u)]
    if len(garbage) > GC_SUBSET_LIMIT:
        subsets = [tuple(garbage)] + [(x,) for x in garbage]
    else:
        subsets = [tuple(c) for n in range(1, len(garbage) + 1)
                   for c in itertools.combinations(garbage, n)]
    for drop in subsets:
        # dropping every binding leaves the bare body, as gc-2 would
        kept = [s for y, s in u.binds if y not in drop]
        used = set().union(*(free_vars(s) for s in kept))
        if not used & set(drop):
            out.append((drop, mk_let(_without(u, *drop), u.body)))
    return out


def r_gc_2(u):
    if isinstance(u, Let) and not ({x for x, _ in u.binds} & free_vars(u.body)):
        return [((), u.body)]
    return []


def r_probid(u):
    if isinstance(u, Choice) and alpha_equiv(u.left, u.right):
        return [((), u.left)]
    return []


def r_probcomm(u):
    if isinstance(u, Choice):
        return [((), Choice(u.right, u.left))]
    return []


def r_probassoc(u):
    if isinstance(u, Choice) and isinstance(u.right, Choice):
        return [((), Choice(Choice(u.left, u.right.left), u.right.right))]
    return []


def r_probdistr(u):
    if isinstance(u, Choice) and isinstance(u.right, Choice):
        r = u.left
        return [((), Choice(Choice(r, u.right.left), Choice(_copy(r, all_names(u)), u.right.right)))]
    return []


def r_probreorder(u):
    if isinstance(u, Choice) and isinstance(u.left, Choice) and isinstance(u.right, Choice):
        (s1, s2), (t1, t2) = (u.left.left, u.left.right), (u.right.left, u.right.right)
        return [((), Choice(Choice(s1, t1), Choice(s2, t2)))]
    return []


# ---------------------------------------------------------------- extended rules

def _is_value(e: Expr) -> bool:
    return isinstance(e, (Lam, Ctor))


def r_seq_c(u):
    if isinstance(u, Seq) and _is_value(u.first):
        return [((), u.second)]
    return []


def _parent_occurrences(e: Expr, x: Name, kind):
    """Positions of Seq/Case nodes in ``e`` whose first/scrutinee is the free variable x."""
    out = []
    for q in occurrences(e, x):
        if q and q[-1] == 0:
            p = subterm(e, q[:-1])
            if isinstance(p, kind):
                out.append(q[:-1])
    return out


def _ctor_bindings(u):
    if not isinstance(u, Let):
        return []
    return [(x, c) for x, c in u.binds if isinstance(c, Ctor)]


def r_seq_in(u):
    out = []
    for x, _ in _ctor_bindings(u):
        for q in _parent_occurrences(u.body, x, Seq):
            out.append(((x, q), Let(u.binds, replace(u.body, q, subterm(u.body, q).second))))
    return out


def r_seq_e(u):
    out = []
    for y, _ in _ctor_bindings(u):
        for x, s in u.binds:
            if x == y:
                continue
            for q in _parent_occurrences(s, y, Seq):
                out.append(((y, x, q), Let(_set_bind(u, x, replace(s, q, subterm(s, q).second)), u.body)))
    return out


def _alt(case: Case, ctor: str):
    for a in case.alts:
        if a.ctor == ctor:
            return a
    return None


def r_case_c(u):
    if isinstance(u, Case) and isinstance(u.scrut, Ctor):
        a = _alt(u, u.scrut.name)
        if a is not None and len(a.vars) == len(u.scrut.args):
            return [((), mk_let(zip(a.vars, u.scrut.args), a.body))]
    return []


def _case_share(u: Let, x: Name, c: Ctor, where, q):
    """Shared case reduction of the case at ``q`` inside binding ``where`` (None = body)."""
    host = u.body if where is None else u.lookup(where)
    case = subterm(host, q)
    a = _alt(case, c.name)
    if a is None or len(a.vars) != len(c.args):
        return None
    supply = NameSupply(all_names(u))
    zs = [supply.fresh(y.base) for y in a.vars]
    host2 = replace(host, q, mk_let(zip(a.vars, (Var(z) for z in zs)), a.body))
    binds = []
    for y, s in u.binds:
        if y == x:
            binds.append((y, Ctor(c.name, tuple(Var(z) for z in zs))))
            binds.extend(zip(zs, c.args))
        elif y == where:
            binds.append((y, host2))
        else:
            binds.append((y, s))
    return Let(tuple(binds), host2 if where is None else u.body)


def r_case_in(u):
    out = []
    for x, c in _ctor_bindings(u):
        for q in _parent_occurrences(u.body, x, Case):
            r = _case_share(u, x, c, None, q)
            if r is not None:
                out.append(((x, q), r))
    return out


def r_case_e(u):
    out = []
    for z, c in _ctor_bindings(u):
        for x, s in u.binds:
            if x == z:
                continue
            for q in _parent_occurrences(s, z, Case):
                r = _case_share(u, z, c, x, q)
                if r is not None:
                    out.append(((z, x, q), r))
    return out


def _abstract(u: Let, x: Name, c: Ctor):
    """Bindings with x = c y1..yn, y_i = s_i for fresh y_i."""
    supply = NameSupply(all_names(u))
    ys = [supply.fresh("y") for _ in c.args]
    skel = Ctor(c.name, tuple(Var(y) for y in ys))
    binds = []
    for y, s in u.binds:
        binds.append((y, skel if y == x else s))
        if y == x:
            binds.extend(zip(ys, c.args))
    return tuple(binds), skel


def r_cpcx_in(u):
    out = []
    for x, c in _ctor_bindings(u):
        for q in occurrences(u.body, x):
            binds, skel = _abstract(u, x, c)
            out.append(((x, q), Let(binds, replace(u.body, q, skel))))
    return out


def r_cpcx_e(u):
    out = []
    for x, c in _ctor_bindings(u):
        for z, s in u.binds:
            if z == x:
                continue
            for q in occurrences(s, x):
                binds, skel = _abstract(u, x, c)
                binds = tuple((y, replace(s, q, skel) if y == z else r) for y, r in binds)
                out.append(((x, z, q), Let(binds, u.body)))
    return out


def r_abs(u):
    out = []
    for x, c in _ctor_bindings(u):
        if c.args:
            binds, _ = _abstract(u, x, c)
            out.append(((x,), Let(binds, u.body)))
    return out


# ---------------------------------------------------------------- catalog

RULES = {
    "lbeta": r_lbeta, "lapp": r_lapp, "cp-in": r_cp_in, "cp-e": r_cp_e,
    "llet-in": r_llet_in, "llet-e": r_llet_e, "cpx-in": r_cpx_in, "cpx-e": r_cpx_e,
    "ucp-1": r_ucp_1, "ucp-2": r_ucp_2, "ucp-3": r_ucp_3, "xch": r_xch,
    "gc-1": r_gc_1, "gc-2": r_gc_2, "probid": r_probid, "probcomm": r_probcomm,
    "probassoc": r_probassoc, "probdistr": r_probdistr, "probreorder": r_probreorder,
    "cpd": r_cpd, "cpS": r_cps,
    "seq-c": r_seq_c, "seq-in": r_seq_in, "seq-e": r_seq_e,
    "case-c": r_case_c, "case-in": r_case_in, "case-e": r_case_e,
    "lcase": r_lcase, "lseq": r_lseq, "cpcx-in": r_cpcx_in, "cpcx-e": r_cpcx_e, "abs": r_abs,
}

CORE_UNIONS = {
    "cpx": ("cpx-in", "cpx-e"),
    "llet": ("llet-in", "llet-e"),
    "lll": ("llet-in", "llet-e", "lapp"),
    "gc": ("gc-1", "gc-2"),
    "ucp": ("ucp-1", "ucp-2", "ucp-3"),
    "cp": ("cp-in", "cp-e"),
}

EXT_UNIONS = {
    "cpcx": ("cpcx-in", "cpcx-e"),
    "case": ("case-c", "case-in", "case-e"),
    "seq": ("seq-c", "seq-in", "seq-e"),
    "lacs": ("lapp", "lcase", "lseq"),
    "lll": ("llet-in", "llet-e", "lapp", "lcase", "lseq"),
}

EXTENDED_ONLY = {"seq-c", "seq-in", "seq-e", "case-c", "case-in", "case-e", "lcase", "lseq",
                 "cpcx-in", "cpcx-e", "abs", "cpcx", "case", "seq", "lacs"}


def members(rule: str, extended: bool = False) -> tuple:
    """The member rules a (possibly union) label stands for."""
    if extended and rule in EXT_UNIONS:
        return EXT_UNIONS[rule]
    if rule in CORE_UNIONS:
        return CORE_UNIONS[rule]
    if rule in EXT_UNIONS:
        return EXT_UNIONS[rule]
    if rule in RULES:
        return (rule,)
    raise UnknownRule(rule)


def all_rule_names() -> list:
    return sorted(set(RULES) | set(CORE_UNIONS) | set(EXT_UNIONS))


def match_sites(e: Expr, rule: str, cls: str = C, extended: bool = False) -> list:
    """All matches of ``rule`` inside a context of class ``cls``, ordered by position."""
    if cls not in CLASSES:
        raise ValueError(f"unknown context class {cls}")
    names = members(rule, extended)
    out = []
    for p in positions(e):
        u = subterm(e, p)
        found = []
        for name in names:
            found.extend(RedexMatch(name, p, w) for w, _ in RULES[name](u))
        if found and cls in classify_position(e, p):
            out.extend(found)
    return out


def apply(e: Expr, m: RedexMatch) -> Expr:
    try:
        u = subterm(e, m.site)
    except (KeyError, IndexError, TypeError, AttributeError) as exc:
        raise StaleMatch(f"site {m.site} no longer exists") from exc
    for w, r in RULES[m.rule](u):
        if w == m.witness:
            return replace(e, m.site, r)
    raise StaleMatch(f"{m.rule} does not match at {m.site}")


def rewrite_all(e: Expr, rule: str, cls: str = C, extended: bool = False) -> list:
    """All (match, result) pairs for one step of ``rule`` in class ``cls``."""
    return [(m, apply(e, m)) for m in match_sites(e, rule, cls, extended)]


# ---------------------------------------------------------------- metadata

@dataclass(frozen=True)
class Metadata:
    correct: str
    preserves_prob_sequences: bool
    direction_invertible: bool


_SAME_PS = {"lbeta", "lapp", "cp-in", "cp-e", "llet-in", "llet-e", "cpx-in", "cpx-e", "xch",
            "lll", "llet", "cp", "cpx", "cpd", "cpS", "seq-c", "seq-in", "seq-e", "case-c",
            "case-in", "case-e", "lcase", "lseq", "cpcx-in", "cpcx-e", "cpcx", "case", "seq",
            "lacs", "abs", "gc-1", "gc-2", "gc", "ucp-1", "ucp-2", "ucp-3", "ucp"}
_INVERTIBLE = {"probcomm", "probreorder", "xch"}


def transformation_metadata(rule: str) -> Metadata:
    if rule not in all_rule_names():
        raise UnknownRule(rule)
    correct = "no" if rule == "probassoc" else "yes"
    return Metadata(correct, rule in _SAME_PS, rule in _INVERTIBLE)


# ---------------------------------------------------------------- lll measure

def lm_measure(e: Expr) -> int:
    if isinstance(e, Var):
        return 1
    if isinstance(e, Lam):
        return 1 + lm_measure(e.body)
    if isinstance(e, App):
        return 2 * lm_measure(e.fun) + lm_measure(e.arg)
    if isinstance(e, Let):
        return 2 * sum(lm_measure(s) for _, s in e.binds) + lm_measure(e.body)
    # choice and the extended constructs are not covered by the base
    # formula; these extensions keep every lll rule strictly decreasing
    if isinstance(e, Choice):
        return 1 + lm_measure(e.left) + lm_measure(e.right)
    if isinstance(e, Ctor):
        return 1 + sum(lm_measure(a) for a in e.args)
    if isinstance(e, Seq):
        return 2 * lm_measure(e.first) + lm_measure(e.second)
    if isinstance(e, Case):
        return 2 * lm_measure(e.scrut) + sum(1 + lm_measure(a.body) for a in e.alts)
    raise TypeError(e)


def lmp_measure(e: Expr) -> tuple:
    return (count_lets(e), lm_measure(e))
