"""Weighted evaluation trees, expected convergence intervals and frontiers."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .reduction import (AtProb, FuelExhausted, ProbBranch, ReachedStuck, ReachedWhnf,
                        prepare, run_until_prob, sr_step)
from .terms import Expr

SUCCESS = "success"
STUCK = "stuck"
FUEL = "fuel-exhausted"
BUDGET = "budget-exhausted"
LEAF_KINDS = (SUCCESS, STUCK, FUEL, BUDGET)


@dataclass(frozen=True)
class Leaf:
    kind: str
    weight: Fraction
    probseq: str
    expr: Expr
    trace: tuple = ()
    reason: str | None = None


@dataclass(frozen=True)
class ProbNode:
    weight: Fraction
    probseq: str
    expr: Expr
    trace: tuple
    left: "Node"
    right: "Node"


Node = Union[Leaf, ProbNode]


@dataclass(frozen=True)
class EvalTree:
    root: Expr
    node: Node
    k: int
    fuel: int

    def leaves(self) -> list:
        out, stack = [], [self.node]
        while stack:
            n = stack.pop()
            if isinstance(n, Leaf):
                out.append(n)
            else:
                stack.append(n.right)
                stack.append(n.left)
        return out


def explore(e: Expr, k: int, fuel: int) -> EvalTree:
    """Unfold all evaluations of ``e`` with at most ``k`` prob steps.

    ``fuel`` bounds the deterministic steps along each path.
    """
    e = prepare(e)
    return EvalTree(e, _explore(e, k, fuel, Fraction(1), ""), k, fuel)


def _explore(e, k, fuel, w, ps) -> Node:
    out = run_until_prob(e, fuel)
    if isinstance(out, ReachedWhnf):
        return Leaf(SUCCESS, w, ps, out.expr, out.trace)
    if isinstance(out, ReachedStuck):
        return Leaf(STUCK, w, ps, out.expr, out.trace, out.reason)
    if isinstance(out, FuelExhausted):
        return Leaf(FUEL, w, ps, out.expr, out.trace)
    if len(ps) >= k:
        return Leaf(BUDGET, w, ps, out.expr, out.trace)
    rest = fuel - len(out.trace)
    half = w / 2
    return ProbNode(w, ps, out.expr, out.trace,
                    _explore(out.left, k, rest, half, ps + "L"),
                    _explore(out.right, k, rest, half, ps + "R"))


@dataclass(frozen=True)
class ExcvBounds:
    lo: Fraction
    hi: Fraction
    exact: bool
    counts: dict = field(default_factory=dict)

    def scale(self, p: Fraction) -> "ExcvBounds":
        return ExcvBounds(self.lo * p, self.hi * p, self.exact, dict(self.counts))

    def __str__(self):
        return f"lo={fmt(self.lo)} hi={fmt(self.hi)} exact={'true' if self.exact else 'false'}"


def fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def bounds_of(tree: EvalTree) -> ExcvBounds:
    counts = Counter({kind: 0 for kind in LEAF_KINDS})
    lo = undecided = Fraction(0)
    for leaf in tree.leaves():
        counts[leaf.kind] += 1
        if leaf.kind == SUCCESS:
            lo += leaf.weight
        elif leaf.kind in (FUEL, BUDGET):
            undecided += leaf.weight
    return ExcvBounds(lo, lo + undecided, undecided == 0 and not counts[FUEL] and not counts[BUDGET],
                      dict(counts))


def excv_bounds(e: Expr, k: int, fuel: int) -> ExcvBounds:
    return bounds_of(explore(e, k, fuel))


def excv_scaled(p, e: Expr, k: int, fuel: int) -> ExcvBounds:
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("weight must satisfy 0 < p <= 1")
    return excv_bounds(e, k, fuel).scale(p)


def evaluations(e: Expr, k: int, fuel: int) -> list:
    """Successful evaluations as (probseq, weight, whnf) in L-before-R order."""
    return [(l.probseq, l.weight, l.expr) for l in explore(e, k, fuel).leaves() if l.kind == SUCCESS]


MAY_CONVERGENT = "MayConvergentWitnessed"
ALL_DIVERGENT = "AllBranchesDivergentAtBound"
UNDETERMINED = "Undetermined"


def convergence_class(e: Expr, k: int, fuel: int) -> str:
    leaves = explore(e, k, fuel).leaves()
    if any(l.kind == SUCCESS for l in leaves):
        return MAY_CONVERGENT
    if all(l.kind == STUCK for l in leaves):
        return ALL_DIVERGENT
    return UNDETERMINED


# ---------------------------------------------------------------- frontiers

class FrontierError(ValueError):
    pass


class StrictnessViolation(FrontierError):
    pass


def check_frontier(words) -> list:
    """A frontier is a complete prefix-free code over {L, R}."""
    words = list(words)
    if not words:
        raise FrontierError("empty frontier")
    for w in words:
        if set(w) - {"L", "R"}:
            raise FrontierError(f"word {w!r} is not over L/R")
    if len(set(words)) != len(words):
        raise FrontierError("duplicate word in frontier")
    for a in words:
        for b in words:
            if a != b and b.startswith(a):
                raise FrontierError(f"{a!r} is a prefix of {b!r}")
    if sum(Fraction(1, 2 ** len(w)) for w in words) != 1:
        raise FrontierError("frontier is not complete")
    return sorted(words)


def full_frontier(depth: int) -> list:
    words = [""]
    for _ in range(depth):
        words = [w + c for w in words for c in "LR"]
    return words


def frontier_evaluate(e: Expr, words, relaxed: bool = False, fuel: int = 1000) -> list:
    """Unfold ``e`` along a frontier, giving [(weight, expr)] in frontier order.

    Strict mode only admits prob steps.  Relaxed mode runs deterministic
    steps before each prob step.
    """
    words = check_frontier(words)
    e = prepare(e) if relaxed else e
    out = []
    for w in words:
        cur = e
        for i, c in enumerate(w):
            if relaxed:
                step = run_until_prob(cur, fuel)
                if not isinstance(step, AtProb):
                    raise FrontierError(f"word {w!r}: no prob step available after {w[:i]!r}")
                left, right = step.left, step.right
            else:
                step = sr_step(cur)
                if not isinstance(step, ProbBranch):
                    raise StrictnessViolation(f"word {w!r}: no prob redex after {w[:i]!r}")
                left, right = step.left, step.right
            cur = left if c == "L" else right
        out.append((Fraction(1, 2 ** len(w)), cur))
    return out
