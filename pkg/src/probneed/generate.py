"""Random closed terms for fuzzing."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .ctors import DEFAULT_TABLE, CtorTable
from .terms import (BOT, ID, K, K2, Alt, App, Case, Choice, Ctor, Expr, Lam, Let, NameSupply,
                    Seq, Var, freshen, size)


@dataclass
class GenConfig:
    size: int = 25
    w_var: float = 3.0
    w_comb: float = 2.0
    w_lam: float = 2.0
    w_app: float = 3.0
    w_choice: float = 2.0
    w_let: float = 2.5
    w_bot: float = 1.0       # weight of Bot among the closed combinators
    w_ctor: float = 0.0
    w_case: float = 0.0
    w_seq: float = 0.0
    table: CtorTable = DEFAULT_TABLE

    @classmethod
    def bot_rich(cls, size: int = 25) -> "GenConfig":
        return cls(size=size, w_bot=4.0, w_choice=4.0, w_let=1.0, w_var=1.0)

    @classmethod
    def choice_rich(cls, size: int = 25) -> "GenConfig":
        return cls(size=size, w_choice=6.0, w_let=1.5)

    @classmethod
    def let_rich(cls, size: int = 25) -> "GenConfig":
        return cls(size=size, w_let=5.0, w_var=5.0)

    @classmethod
    def extended(cls, size: int = 25) -> "GenConfig":
        return cls(size=size, w_ctor=2.0, w_case=1.5, w_seq=1.0)


class Generator:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng

    def term(self) -> Expr:
        for _ in range(100):
            self.supply = NameSupply()
            e = freshen(self._gen(self.cfg.size, ()))
            if size(e) <= self.cfg.size:
                return e
        return freshen(ID)

    def _comb(self) -> Expr:
        c = self.cfg
        return self.rng.choices([ID, K, K2, BOT], [1.0, 1.0, 1.0, c.w_bot])[0]

    def _leaf(self, scope) -> Expr:
        if scope and self.rng.random() < self.cfg.w_var / (self.cfg.w_var + self.cfg.w_comb):
            return Var(self.rng.choice(scope))
        return self._comb()

    def _gen(self, budget: int, scope) -> Expr:
        c, rng = self.cfg, self.rng
        if budget <= 3:
            return self._leaf(scope)
        kinds = ["leaf", "lam", "app", "choice", "let"]
        weights = [c.w_var + c.w_comb, c.w_lam, c.w_app, c.w_choice, c.w_let]
        if c.w_ctor:
            kinds += ["ctor", "case", "seq"]
            weights += [c.w_ctor, c.w_case, c.w_seq]
        kind = rng.choices(kinds, weights)[0]
        b = budget - 1
        if kind == "leaf":
            return self._leaf(scope)
        if kind == "lam":
            x = self.supply.fresh(rng.choice("uvw"))
            return Lam(x, self._gen(b, scope + (x,)))
        if kind in ("app", "choice", "seq"):
            left = rng.randint(1, b - 1)
            f, a = self._gen(left, scope), self._gen(b - left, scope)
            return {"app": App, "choice": Choice, "seq": Seq}[kind](f, a)
        if kind == "let":
            n = rng.choice((1, 1, 2, 2, 3))
            xs = tuple(self.supply.fresh(rng.choice("xyz")) for _ in range(n))
            inner = scope + xs
            share = max(1, b // (n + 1))
            binds = tuple((x, self._gen(share, inner)) for x in xs)
            return Let(binds, self._gen(max(1, b - share * n), inner))
        if kind == "ctor":
            ty = rng.choice(sorted(c.table.types))
            name, arity = rng.choice(c.table.ctors(ty))
            share = max(1, b // max(1, arity))
            return Ctor(name, tuple(self._gen(share, scope) for _ in range(arity)))
        # case
        ty = rng.choice(sorted(c.table.types))
        ctors = c.table.ctors(ty)
        share = max(1, b // (len(ctors) + 1))
        alts = []
        for name, arity in ctors:
            ys = tuple(self.supply.fresh("p") for _ in range(arity))
            alts.append(Alt(name, ys, self._gen(share, scope + ys)))
        return Case(ty, self._gen(share, scope), tuple(alts))


def random_terms(cfg: GenConfig, seed: int):
    """An endless, seed-determined stream of closed terms."""
    gen = Generator(cfg, random.Random(seed))
    while True:
        yield gen.term()
