"""Bounded checks for the contextual preorder and its refutation."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .convergence import (BUDGET, FUEL, STUCK, SUCCESS, ExcvBounds, Leaf, ProbNode, bounds_of,
                          excv_bounds, explore, fmt)
from .generate import GenConfig, Generator
from .terms import (BOT, ID, K, K2, A, C, R, S, App, Choice, Expr, Hole, Lam, Name, Var,
                    alpha_equiv, classify_position, hole_path, plug, positions)
from .text import show
from .transform import apply, match_sites, transformation_metadata


@dataclass(frozen=True)
class Holds:
    note: str = ""


@dataclass(frozen=True)
class FailsWith:
    witness: object


@dataclass(frozen=True)
class Inconclusive:
    reason: str


Verdict = Union[Holds, FailsWith, Inconclusive]


# ---------------------------------------------------------------- same prob-sequences

def _follow(node, word: str):
    """The node reached by following ``word`` from ``node`` (a leaf may end early)."""
    for c in word:
        if isinstance(node, Leaf):
            return node
        node = node.left if c == "L" else node.right
    return node


def same_prob_sequences_check(s: Expr, t: Expr, k: int, fuel: int) -> Verdict:
    """Every evaluation of s with prob-sequence L has a counterpart for t with the same L."""
    ts = explore(t, k, fuel)
    undecided = None
    for leaf in explore(s, k, fuel).leaves():
        if leaf.kind == FUEL:
            # the branch may still succeed later
            undecided = undecided or leaf.probseq or "ε"
            continue
        if leaf.kind != SUCCESS:
            continue
        n = _follow(ts.node, leaf.probseq)
        if isinstance(n, Leaf) and n.probseq == leaf.probseq and n.kind == SUCCESS:
            continue
        if isinstance(n, Leaf) and n.kind == FUEL:
            undecided = undecided or leaf.probseq
            continue
        return FailsWith(leaf.probseq or "ε")
    if undecided is not None:
        return Inconclusive("fuel")
    return Holds()


# ---------------------------------------------------------------- frontier criteria

EQCR = ("EqCr1", "EqCr2", "EqCr3")


def _group(entries) -> list:
    """Aggregate (weight, expr) entries by alpha-equivalence."""
    groups = []
    for q, e in entries:
        for g in groups:
            if alpha_equiv(g[1], e):
                g[0] += q
                break
        else:
            groups.append([Fraction(q), e])
    return groups


def _sum_for(entries, e) -> Fraction:
    return sum((Fraction(q) for q, x in entries if alpha_equiv(x, e)), Fraction(0))


def frontier_criteria_check(a, b, criterion: str, divergent=None, k: int = 4,
                            fuel: int = 1000) -> Verdict:
    """Compare two frontier evaluation results.

    EqCr3 skips entries that are certified divergent; by default an entry
    counts as divergent when its ExCv interval at (k, fuel) is exactly [0, 0].
    """
    if criterion not in EQCR:
        raise ValueError(f"unknown criterion {criterion}")
    if criterion == "EqCr1":
        for q, e in a:
            if not any(alpha_equiv(e, x) and Fraction(q) <= Fraction(p) for p, x in b):
                return FailsWith((q, e))
        return Holds()
    if divergent is None:
        def divergent(e):
            bd = excv_bounds(e, k, fuel)
            return bd.hi == 0
    for q, e in _group(a):
        if criterion == "EqCr3" and divergent(e):
            continue
        if q > _sum_for(b, e):
            return FailsWith((q, e))
    return Holds()


# ---------------------------------------------------------------- context lemma precondition

def excv_at(e: Expr, k: int, fuel: int):
    """Certified bounds on ExCv(e, k): evaluations with at most k prob steps."""
    tree = explore(e, k, fuel)
    lo = sum((l.weight for l in tree.leaves() if l.kind == SUCCESS), Fraction(0))
    fuel_mass = sum((l.weight for l in tree.leaves() if l.kind == FUEL), Fraction(0))
    return lo, lo + fuel_mass


def excv_offset_check(s: Expr, t: Expr, contexts, k: int, d: int, fuel: int) -> Verdict:
    """ExCv(R[s], k) <= ExCv(R[t], k + d) for each given reduction context R."""
    verdict: Verdict = Holds()
    for ctx in contexts:
        if R not in classify_position(ctx, hole_path(ctx)):
            raise ValueError(f"not a reduction context: {show(ctx)}")
        if d >= 0 and alpha_equiv(s, t):
            continue    # ExCv(r, k) is monotone in k
        s_lo, s_hi = excv_at(plug(ctx, s), k, fuel)
        t_lo, t_hi = excv_at(plug(ctx, t), k + d, fuel)
        if s_lo > t_hi:
            return FailsWith((ctx, (s_lo, s_hi), (t_lo, t_hi)))
        if s_hi > t_lo:
            verdict = Inconclusive("fuel")
    return verdict


# ---------------------------------------------------------------- contexts

COMBINATORS = (ID, K, K2, BOT)


def _leaves(pool, scope):
    return list(COMBINATORS) + list(pool) + [Var(x) for x in scope]


def _terms(n: int, pool, scope) -> Iterator[Expr]:
    """Hole-free terms of exactly n nodes; combinators and pool entries count as one."""
    if n == 1:
        yield from _leaves(pool, scope)
        return
    x = Name("v", len(scope))
    for body in _terms(n - 1, pool, scope + (x,)):
        yield Lam(x, body)
    for op in (App, Choice):
        for i in range(1, n - 1):
            for f in _terms(i, pool, scope):
                for a in _terms(n - 1 - i, pool, scope):
                    yield op(f, a)


def _contexts(n: int, pool, scope) -> Iterator[Expr]:
    if n == 1:
        yield Hole()
        return
    for op in (App, Choice):
        for i in range(1, n - 1):
            for f in _contexts(i, pool, scope):
                for a in _terms(n - 1 - i, pool, scope):
                    yield op(f, a)
            for f in _terms(i, pool, scope):
                for a in _contexts(n - 1 - i, pool, scope):
                    yield op(f, a)
    x = Name("v", len(scope))
    for body in _contexts(n - 1, pool, scope + (x,)):
        yield Lam(x, body)


def enumerate_contexts(budget: int, cls: str = C, leaf_pool=()) -> Iterator[Expr]:
    """Contexts with at most ``budget`` nodes, smallest first, restricted to ``cls``.

    Binders are named by depth, so distinct contexts are never alpha-equal.
    """
    for n in range(1, budget + 1):
        for ctx in _contexts(n, tuple(leaf_pool), ()):
            if cls == C or cls in classify_position(ctx, hole_path(ctx)):
                yield ctx


@dataclass(frozen=True)
class Refutation:
    context: Expr
    left: ExcvBounds
    right: ExcvBounds

    def __str__(self):
        return (f"context {show(self.context)}: [{fmt(self.left.lo)},{fmt(self.left.hi)}]"
                f" vs [{fmt(self.right.lo)},{fmt(self.right.hi)}]")


def disjoint(a: ExcvBounds, b: ExcvBounds) -> bool:
    return a.lo > b.hi or b.lo > a.hi


def counterexample_search(s: Expr, t: Expr, ctx_budget: int, k: int, fuel: int,
                          cls: str = C, leaf_pool=()) -> Verdict:
    """The first context whose certified ExCv intervals for s and t are disjoint."""
    for ctx in enumerate_contexts(ctx_budget, cls, leaf_pool):
        bs = excv_bounds(plug(ctx, s), k, fuel)
        bt = excv_bounds(plug(ctx, t), k, fuel)
        if disjoint(bs, bt):
            return FailsWith(Refutation(ctx, bs, bt))
    return Inconclusive("enumeration-limit")


# ---------------------------------------------------------------- fuzzing

@dataclass(frozen=True)
class FuzzConfig:
    rule: str
    cls: str = S
    trials: int = 500
    seed: int = 0
    size: int = 25
    k: int = 4
    fuel: int = 2000
    extended: bool = False
    bot_rich: bool = False
    max_attempts: int = 400


@dataclass(frozen=True)
class Trial:
    index: int
    source: Expr
    site: tuple
    member: str
    target: Expr
    src_bounds: ExcvBounds
    tgt_bounds: ExcvBounds
    violation: bool
    same_ps: Optional[tuple]  # (forward verdict, backward verdict) on decided trees

    def record(self) -> str:
        v = "VIOLATION" if self.violation else "ok"
        return (f"{self.index} {self.member} site={'/'.join(map(str, self.site)) or 'root'} "
                f"src=[{fmt(self.src_bounds.lo)},{fmt(self.src_bounds.hi)}] "
                f"tgt=[{fmt(self.tgt_bounds.lo)},{fmt(self.tgt_bounds.hi)}] {v}")


@dataclass
class FuzzReport:
    config: FuzzConfig
    trials: list = field(default_factory=list)
    skipped: int = 0

    @property
    def violations(self) -> list:
        return [t for t in self.trials if t.violation]

    @property
    def same_ps_failures(self) -> list:
        return [t for t in self.trials if t.same_ps and
                any(isinstance(v, FailsWith) for v in t.same_ps)]

    @property
    def decided(self) -> list:
        return [t for t in self.trials if t.same_ps is not None]

    def summary(self) -> dict:
        first = self.violations[0] if self.violations else None
        return {
            "rule": self.config.rule, "class": self.config.cls, "seed": self.config.seed,
            "trials": len(self.trials), "skipped": self.skipped,
            "violations": len(self.violations),
            "same_ps_checked": len(self.decided),
            "same_ps_failures": len(self.same_ps_failures),
            "first_witness": None if first is None else
            {"source": show(first.source), "target": show(first.target), "site": list(map(str, first.site))},
        }


def _decided(b: ExcvBounds) -> bool:
    return b.counts.get(FUEL, 0) == 0 and b.counts.get(BUDGET, 0) == 0


def soundness_fuzz(cfg: FuzzConfig) -> FuzzReport:
    """Apply the rule at random sites of random terms and compare ExCv intervals."""
    rng = random.Random(cfg.seed)
    if cfg.bot_rich:
        gcfg = GenConfig.bot_rich(cfg.size)
    elif cfg.extended:
        gcfg = GenConfig.extended(cfg.size)
    elif cfg.rule.startswith("prob"):
        gcfg = GenConfig.choice_rich(cfg.size)
    else:
        gcfg = GenConfig(size=cfg.size)
    gen = Generator(gcfg, rng)
    check_ps = transformation_metadata(cfg.rule).preserves_prob_sequences
    report = FuzzReport(cfg)
    for i in range(cfg.trials):
        for _ in range(cfg.max_attempts):
            src = gen.term()
            ms = match_sites(src, cfg.rule, cfg.cls, cfg.extended)
            if ms:
                break
        else:
            report.skipped += 1
            continue
        m = rng.choice(ms)
        tgt = apply(src, m)
        bs = excv_bounds(src, cfg.k, cfg.fuel)
        bt = excv_bounds(tgt, cfg.k, cfg.fuel)
        same_ps = None
        if check_ps and _decided(bs) and _decided(bt):
            same_ps = (same_prob_sequences_check(src, tgt, cfg.k, cfg.fuel),
                       same_prob_sequences_check(tgt, src, cfg.k, cfg.fuel))
        report.trials.append(Trial(i, src, m.site, m.rule, tgt, bs, bt, disjoint(bs, bt), same_ps))
    return report
