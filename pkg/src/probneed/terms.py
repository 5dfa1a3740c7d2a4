"""Abstract syntax, binding, alpha-equivalence and positions.

Terms are immutable.  Let environments are stored as ordered tuples but
compare as multisets.  A position is a tuple of selectors: ints for most
children, ``"body"`` or a :class:`Name` for the children of a ``Let``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional

NAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*")


@dataclass(frozen=True, order=True, slots=True)
class Name:
    base: str
    index: int = 0

    def __str__(self) -> str:
        return self.base if self.index == 0 else f"{self.base}#{self.index}"


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: Name


@dataclass(frozen=True)
class Lam(Expr):
    var: Name
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    fun: Expr
    arg: Expr


@dataclass(frozen=True)
class Choice(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Let(Expr):
    binds: tuple  # tuple of (Name, Expr)
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "_env", dict(self.binds))

    def __eq__(self, other):
        if not isinstance(other, Let):
            return NotImplemented
        return self.body == other.body and self._env == other._env

    def __hash__(self):
        return hash((frozenset(self.binds), self.body))

    def names(self) -> list:
        return [x for x, _ in self.binds]

    def lookup(self, x: Name) -> Optional[Expr]:
        return self._env.get(x)


@dataclass(frozen=True)
class Ctor(Expr):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Alt:
    ctor: str
    vars: tuple
    body: Expr


@dataclass(frozen=True)
class Case(Expr):
    type: str
    scrut: Expr
    alts: tuple


@dataclass(frozen=True)
class Seq(Expr):
    first: Expr
    second: Expr


@dataclass(frozen=True)
class Hole(Expr):
    """The hole of a context."""


def mk_let(binds, body: Expr) -> Expr:
    """Build a let, dropping it when the environment is empty."""
    binds = tuple(binds)
    return Let(binds, body) if binds else body


def lams(names, body: Expr) -> Expr:
    for x in reversed(list(names)):
        body = Lam(Name(x) if isinstance(x, str) else x, body)
    return body


def apps(f: Expr, *args: Expr) -> Expr:
    for a in args:
        f = App(f, a)
    return f


def v(s: str) -> Var:
    return Var(Name(s))


# shorthands from the calculus
ID = lams("x", v("x"))
K = lams("xy", v("x"))
K2 = lams("xy", v("y"))
BOT = Let(((Name("x"), v("x")),), v("x"))
OMEGA_SMALL = lams("x", App(v("x"), v("x")))
OMEGA = App(OMEGA_SMALL, OMEGA_SMALL)
SHORTHANDS = {"id": ID, "K": K, "K2": K2, "Bot": BOT, "Omega": OMEGA}


# ---------------------------------------------------------------- traversal

def children(e: Expr) -> list:
    """(selector, child, binders-introduced) triples."""
    if isinstance(e, (Var, Hole)):
        return []
    if isinstance(e, Lam):
        return [(0, e.body, (e.var,))]
    if isinstance(e, App):
        return [(0, e.fun, ()), (1, e.arg, ())]
    if isinstance(e, Choice):
        return [(0, e.left, ()), (1, e.right, ())]
    if isinstance(e, Let):
        bound = tuple(x for x, _ in e.binds)
        out = [(x, s, bound) for x, s in e.binds]
        out.append(("body", e.body, bound))
        return out
    if isinstance(e, Ctor):
        return [(i, a, ()) for i, a in enumerate(e.args)]
    if isinstance(e, Case):
        out = [(0, e.scrut, ())]
        out += [(i + 1, alt.body, alt.vars) for i, alt in enumerate(e.alts)]
        return out
    if isinstance(e, Seq):
        return [(0, e.first, ()), (1, e.second, ())]
    raise TypeError(e)


def child(e: Expr, sel) -> Expr:
    if isinstance(e, Let):
        if sel == "body":
            return e.body
        s = e.lookup(sel)
        if s is None:
            raise KeyError(sel)
        return s
    for s, c, _ in children(e):
        if s == sel:
            return c
    raise KeyError(sel)


def with_child(e: Expr, sel, new: Expr) -> Expr:
    if isinstance(e, Lam) and sel == 0:
        return Lam(e.var, new)
    if isinstance(e, App):
        return App(new, e.arg) if sel == 0 else App(e.fun, new)
    if isinstance(e, Choice):
        return Choice(new, e.right) if sel == 0 else Choice(e.left, new)
    if isinstance(e, Let):
        if sel == "body":
            return Let(e.binds, new)
        if e.lookup(sel) is None:
            raise KeyError(sel)
        return Let(tuple((x, new if x == sel else s) for x, s in e.binds), e.body)
    if isinstance(e, Ctor):
        args = list(e.args)
        args[sel] = new
        return Ctor(e.name, tuple(args))
    if isinstance(e, Case):
        if sel == 0:
            return Case(e.type, new, e.alts)
        alts = list(e.alts)
        a = alts[sel - 1]
        alts[sel - 1] = Alt(a.ctor, a.vars, new)
        return Case(e.type, e.scrut, tuple(alts))
    if isinstance(e, Seq):
        return Seq(new, e.second) if sel == 0 else Seq(e.first, new)
    raise KeyError(sel)


def map_children(e: Expr, f) -> Expr:
    """Rebuild ``e`` with each child c replaced by f(selector, c, binders)."""
    if isinstance(e, (Var, Hole)):
        return e
    if isinstance(e, Lam):
        return Lam(e.var, f(0, e.body, (e.var,)))
    if isinstance(e, App):
        return App(f(0, e.fun, ()), f(1, e.arg, ()))
    if isinstance(e, Choice):
        return Choice(f(0, e.left, ()), f(1, e.right, ()))
    if isinstance(e, Let):
        bound = tuple(e._env)
        return Let(tuple((x, f(x, s, bound)) for x, s in e.binds), f("body", e.body, bound))
    if isinstance(e, Ctor):
        return Ctor(e.name, tuple(f(i, a, ()) for i, a in enumerate(e.args)))
    if isinstance(e, Case):
        return Case(e.type, f(0, e.scrut, ()),
                    tuple(Alt(a.ctor, a.vars, f(i + 1, a.body, a.vars)) for i, a in enumerate(e.alts)))
    if isinstance(e, Seq):
        return Seq(f(0, e.first, ()), f(1, e.second, ()))
    raise TypeError(e)


def subterm(e: Expr, path) -> Expr:
    for sel in path:
        e = child(e, sel)
    return e


def replace(e: Expr, path, new: Expr) -> Expr:
    if not path:
        return new
    return with_child(e, path[0], replace(child(e, path[0]), path[1:], new))


def positions(e: Expr, prefix=()) -> Iterator[tuple]:
    """All positions in preorder."""
    yield prefix
    for sel, c, _ in children(e):
        yield from positions(c, prefix + (sel,))


def valid_position(e: Expr, path) -> bool:
    try:
        subterm(e, path)
        return True
    except (KeyError, IndexError, TypeError):
        return False


def size(e: Expr) -> int:
    return 1 + sum(size(c) for _, c, _ in children(e))


def count_lets(e: Expr) -> int:
    return int(isinstance(e, Let)) + sum(count_lets(c) for _, c, _ in children(e))


# ---------------------------------------------------------------- variables

def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    out = set()
    if isinstance(e, Let):
        for _, c, _ in children(e):
            out |= free_vars(c)
        return frozenset(out.difference(e._env))
    for _, c, bound in children(e):
        fv = free_vars(c)
        out |= fv.difference(bound) if bound else fv
    return frozenset(out)


def all_names(e: Expr) -> set:
    out = set()
    stack = [e]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, Let):
            out.update(t._env)
        for _, c, bound in children(t):
            if bound and not isinstance(t, Let):
                out.update(bound)
            stack.append(c)
    return out


def binders(e: Expr) -> list:
    """Binder names in preorder, with repetitions."""
    out = []
    if isinstance(e, Lam):
        out.append(e.var)
    elif isinstance(e, Let):
        out.extend(x for x, _ in e.binds)
    elif isinstance(e, Case):
        for a in e.alts:
            out.extend(a.vars)
    for _, c, _ in children(e):
        out.extend(binders(c))
    return out


def has_distinct_binders(e: Expr) -> bool:
    bs = binders(e)
    return len(bs) == len(set(bs)) and not set(bs) & free_vars(e)


def occurrences(e: Expr, x: Name, prefix=()) -> list:
    """Positions of free occurrences of ``x``."""
    if isinstance(e, Var):
        return [prefix] if e.name == x else []
    if isinstance(e, Let) and x in e._env:
        return []
    out = []
    for sel, c, bound in children(e):
        if isinstance(e, Let) or x not in bound:
            out.extend(occurrences(c, x, prefix + (sel,)))
    return out


def fresh_name(base: str, used) -> Name:
    i = 0
    while Name(base, i) in used:
        i += 1
    return Name(base, i)


class NameSupply:
    """Hands out names not in ``used``; remembers what it handed out."""

    def __init__(self, used=()):
        self.used = set(used)

    def fresh(self, base: str) -> Name:
        n = fresh_name(base, self.used)
        self.used.add(n)
        return n


def freshen(e: Expr, avoid=frozenset()) -> Expr:
    """Rename binders so they are pairwise distinct and avoid ``avoid`` and FV(e)."""
    supply = NameSupply(set(avoid) | free_vars(e))
    return _freshen(e, {}, supply)


def _pick(x: Name, supply: NameSupply) -> Name:
    if x in supply.used:
        return supply.fresh(x.base)
    supply.used.add(x)
    return x


def _freshen(e: Expr, ren: dict, supply: NameSupply) -> Expr:
    if isinstance(e, Var):
        return Var(ren.get(e.name, e.name))
    if isinstance(e, Hole):
        return e
    if isinstance(e, Lam):
        y = _pick(e.var, supply)
        return Lam(y, _freshen(e.body, {**ren, e.var: y}, supply))
    if isinstance(e, Let):
        new = [_pick(x, supply) for x, _ in e.binds]
        inner = {**ren, **dict(zip((x for x, _ in e.binds), new))}
        binds = tuple((y, _freshen(s, inner, supply)) for y, (_, s) in zip(new, e.binds))
        return Let(binds, _freshen(e.body, inner, supply))
    if isinstance(e, Case):
        scrut = _freshen(e.scrut, ren, supply)
        alts = []
        for a in e.alts:
            ys = tuple(_pick(x, supply) for x in a.vars)
            alts.append(Alt(a.ctor, ys, _freshen(a.body, {**ren, **dict(zip(a.vars, ys))}, supply)))
        return Case(e.type, scrut, tuple(alts))
    return map_children(e, lambda sel, c, bound: _freshen(c, ren, supply))


def rename_free(e: Expr, ren: dict) -> Expr:
    """Rename free variables; the caller guarantees no capture."""
    if not ren:
        return e
    if isinstance(e, Var):
        return Var(ren.get(e.name, e.name))
    if isinstance(e, Let):
        inner = {k: w for k, w in ren.items() if k not in e._env}
        return map_children(e, lambda sel, c, bound: rename_free(c, inner))
    return map_children(e, lambda sel, c, bound: rename_free(
        c, {k: w for k, w in ren.items() if k not in bound} if bound else ren))


def substitute(e: Expr, x: Name, t: Expr) -> Expr:
    """Capture-free substitution e[t/x]; every copy of t gets fresh binders."""
    if x not in free_vars(e):
        return e
    fv_t = free_vars(t)
    if set(binders(e)) & fv_t:
        e = freshen(e, fv_t | {x})
    supply = NameSupply(all_names(e) | all_names(t))

    def go(s: Expr) -> Expr:
        if isinstance(s, Var):
            return _freshen(t, {}, supply) if s.name == x else s
        if isinstance(s, Let) and x in s._env:
            return s
        return map_children(s, lambda sel, c, bound: c if x in bound else go(c))

    return go(e)


# ---------------------------------------------------------------- alpha

def shape(e: Expr) -> str:
    """A name-insensitive fingerprint: equal for alpha-equivalent terms."""
    if isinstance(e, Var):
        return "v"
    if isinstance(e, Hole):
        return "[]"
    if isinstance(e, Lam):
        return "(L" + shape(e.body) + ")"
    if isinstance(e, App):
        return "(@" + shape(e.fun) + shape(e.arg) + ")"
    if isinstance(e, Choice):
        return "(+" + shape(e.left) + shape(e.right) + ")"
    if isinstance(e, Let):
        return "(E" + "".join(sorted(shape(s) for _, s in e.binds)) + "|" + shape(e.body) + ")"
    if isinstance(e, Ctor):
        return "(C" + e.name + "".join(shape(a) for a in e.args) + ")"
    if isinstance(e, Case):
        return "(K" + shape(e.scrut) + "".join(a.ctor + shape(a.body) for a in e.alts) + ")"
    if isinstance(e, Seq):
        return "(S" + shape(e.first) + shape(e.second) + ")"
    raise TypeError(e)


class _Pending:
    __slots__ = ("tag",)

    def __init__(self, tag):
        self.tag = tag


def alpha_equiv(a: Expr, b: Expr) -> bool:
    if a is b:
        return True
    if shape(a) != shape(b):
        return False
    counter = itertools.count()
    return next(_alpha(a, b, {}, {}, counter), None) is not None


def _alpha(a, b, m1, m2, counter):
    if type(a) is not type(b):
        return
    if isinstance(a, Var):
        ia, ib = m1.get(a.name), m2.get(b.name)
        if ia is None and ib is None:
            if a.name == b.name:
                yield m1, m2
        elif isinstance(ia, _Pending) and isinstance(ib, _Pending):
            if ia.tag is ib.tag:
                k = next(counter)
                yield {**m1, a.name: k}, {**m2, b.name: k}
        elif ia is not None and ia == ib and not isinstance(ia, _Pending):
            yield m1, m2
        return
    if isinstance(a, Hole):
        yield m1, m2
        return
    if isinstance(a, Lam):
        k = next(counter)
        for s1, s2 in _alpha(a.body, b.body, {**m1, a.var: k}, {**m2, b.var: k}, counter):
            yield _restore(s1, m1, (a.var,)), _restore(s2, m2, (b.var,))
        return
    if isinstance(a, Let):
        if len(a.binds) != len(b.binds):
            return
        ca, cb = _let_colors(a), _let_colors(b)
        if sorted(ca.values()) != sorted(cb.values()):
            return
        tag = _Pending(None)
        xs, ys = [x for x, _ in a.binds], [y for y, _ in b.binds]
        n1 = {**m1, **{x: tag for x in xs}}
        n2 = {**m2, **{y: tag for y in ys}}
        for s1, s2 in _alpha(a.body, b.body, n1, n2, counter):
            for t1, t2 in _alpha_binds(list(a.binds), list(b.binds), s1, s2, counter, ca, cb):
                yield _restore(t1, m1, xs), _restore(t2, m2, ys)
        return
    if isinstance(a, Ctor):
        if a.name != b.name or len(a.args) != len(b.args):
            return
        yield from _alpha_seq(list(zip(a.args, b.args)), m1, m2, counter)
        return
    if isinstance(a, Case):
        if a.type != b.type or len(a.alts) != len(b.alts):
            return
        for s1, s2 in _alpha(a.scrut, b.scrut, m1, m2, counter):
            yield from _alpha_alts(list(zip(a.alts, b.alts)), s1, s2, m1, m2, counter)
        return
    pairs = [(c1, c2) for (_, c1, _), (_, c2, _) in zip(children(a), children(b))]
    yield from _alpha_seq(pairs, m1, m2, counter)


def _restore(m: dict, outer: dict, names) -> dict:
    """Leave a binder's scope: its names map to whatever they meant outside."""
    m = dict(m)
    for x in names:
        if x in outer:
            m[x] = outer[x]
        else:
            m.pop(x, None)
    return m


def _alpha_seq(pairs, m1, m2, counter):
    if not pairs:
        yield m1, m2
        return
    (x, y), rest = pairs[0], pairs[1:]
    for s1, s2 in _alpha(x, y, m1, m2, counter):
        yield from _alpha_seq(rest, s1, s2, counter)


def _alpha_alts(pairs, m1, m2, base1, base2, counter):
    # alternative binders are local; outer bindings discovered inside persist
    if not pairs:
        yield m1, m2
        return
    (x, y), rest = pairs[0], pairs[1:]
    if x.ctor != y.ctor or len(x.vars) != len(y.vars):
        return
    ks = [next(counter) for _ in x.vars]
    i1 = {**m1, **dict(zip(x.vars, ks))}
    i2 = {**m2, **dict(zip(y.vars, ks))}
    for s1, s2 in _alpha(x.body, y.body, i1, i2, counter):
        o1 = {k: w for k, w in s1.items() if k not in x.vars}
        o2 = {k: w for k, w in s2.items() if k not in y.vars}
        for z in x.vars:
            if z in m1:
                o1[z] = m1[z]
        for z in y.vars:
            if z in m2:
                o2[z] = m2[z]
        yield from _alpha_alts(rest, o1, o2, base1, base2, counter)


def _alpha_binds(left, right, m1, m2, counter, c1, c2):
    if not left:
        yield m1, m2
        return
    (x, s), rest = left[0], left[1:]
    ix = m1[x]
    if not isinstance(ix, _Pending):
        for j, (y, t) in enumerate(right):
            if m2[y] == ix:
                if c1[x] == c2[y]:
                    for s1, s2 in _alpha(s, t, m1, m2, counter):
                        yield from _alpha_binds(rest, right[:j] + right[j + 1:], s1, s2,
                                                counter, c1, c2)
                return
        return
    for j, (y, t) in enumerate(right):
        if isinstance(m2[y], _Pending) and c1[x] == c2[y]:
            k = next(counter)
            for s1, s2 in _alpha(s, t, {**m1, x: k}, {**m2, y: k}, counter):
                yield from _alpha_binds(rest, right[:j] + right[j + 1:], s1, s2, counter, c1, c2)


_COLOR_ROUNDS = 3


def _let_colors(e: Let, env: Optional[dict] = None, depth: int = 0, named: bool = False) -> dict:
    """Name-insensitive colours of a let's bindings, refined by what they refer to.

    Alpha-equivalent lets pair bindings of equal colour, so the colours prune
    the search for a binding bijection.
    """
    env = env or {}
    colors = {x: "" for x, _ in e.binds}
    for _ in range(_COLOR_ROUNDS):
        inner = {**env, **{x: "<" + c + ">" for x, c in colors.items()}}
        colors = {x: str(hash(_render(s, inner, depth, named) + "|" + colors[x]))
                  for x, s in e.binds}
    return colors


def _render(e: Expr, env: dict, depth: int, named: bool) -> str:
    if isinstance(e, Var):
        if e.name in env:
            return env[e.name]
        return "f" + str(e.name) if named else "v"
    if isinstance(e, Lam):
        return "(L" + _render(e.body, {**env, e.var: "l%d" % depth}, depth + 1, named) + ")"
    if isinstance(e, Let):
        colors = _let_colors(e, env, depth, named)
        inner = {**env, **{x: "<" + c + ">" for x, c in colors.items()}}
        binds = sorted(_render(s, inner, depth, named) for _, s in e.binds)
        return "(E" + "".join(binds) + "|" + _render(e.body, inner, depth, named) + ")"
    if isinstance(e, Case):
        parts = [_render(e.scrut, env, depth, named)]
        for alt in e.alts:
            inner = {**env, **{v: "a%d.%d" % (depth, i) for i, v in enumerate(alt.vars)}}
            parts.append(alt.ctor + _render(alt.body, inner, depth + 1, named))
        return "(K" + "".join(parts) + ")"
    tag = type(e).__name__ + (e.name if isinstance(e, Ctor) else "")
    return "(" + tag + "".join(_render(c, env, depth, named) for _, c, _ in children(e)) + ")"


def fingerprint(e: Expr) -> str:
    """Equal for alpha-equivalent terms and rarely equal otherwise."""
    return _render(e, {}, 0, True)


# ---------------------------------------------------------------- contexts

A, R, S, C = "A", "R", "S", "C"


def _is_app_path(e: Expr, path) -> bool:
    # A ::= [.] | (A s) | seq A s | case A of alts
    for sel in path:
        if sel != 0 or not isinstance(e, (App, Seq, Case)):
            return False
        e = child(e, sel)
    return True


def _app_head(e: Expr):
    """Descend an application spine; return (head, path)."""
    path = []
    while isinstance(e, (App, Seq, Case)):
        e = e.fun if isinstance(e, App) else e.first if isinstance(e, Seq) else e.scrut
        path.append(0)
    return e, tuple(path)


def _under_lambda(e: Expr, path) -> bool:
    for sel in path:
        if isinstance(e, Lam):
            return True
        e = child(e, sel)
    return False


def needed_chain(e: Let):
    """Binding names reachable as x1, x2, ... from the let body via A-positions."""
    head, _ = _app_head(e.body)
    seen = []
    while isinstance(head, Var) and e.lookup(head.name) is not None and head.name not in seen:
        seen.append(head.name)
        head, _ = _app_head(e.lookup(head.name))
    return seen


def classify_position(e: Expr, path) -> set:
    path = tuple(path)
    if not valid_position(e, path):
        raise ValueError(f"invalid position {path}")
    out = {C}
    if not _under_lambda(e, path):
        out.add(S)
    else:
        return out
    if _is_app_path(e, path):
        out.update((A, R))
    elif isinstance(e, Let) and path:
        if path[0] == "body" and _is_app_path(e.body, path[1:]):
            out.add(R)
        elif (isinstance(path[0], Name) and _is_app_path(e.lookup(path[0]), path[1:])
              and path[0] in needed_chain(e)):
            out.add(R)
    return out


def hole_path(ctx: Expr):
    for p in positions(ctx):
        if isinstance(subterm(ctx, p), Hole):
            return p
    raise ValueError("no hole")


def plug(ctx: Expr, e: Expr) -> Expr:
    return replace(ctx, hole_path(ctx), e)
