"""Seeded experiment drivers shared by the scripts/ entry points."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .convergence import excv_bounds
from .diagrams import CORE_SETS, EXTENDED_SETS, validate_set
from .equivalence import FuzzConfig, Holds, soundness_fuzz
from .text import parse

SOUND_RULES = ("probid", "probcomm", "probdistr", "probreorder", "lbeta", "lll", "cp", "cpx",
               "xch", "gc", "ucp")
PS_RULES = ("lbeta", "lll", "cp", "cpx", "xch")


@dataclass
class FuzzSuiteConfig:
    rules: tuple = SOUND_RULES
    trials: int = 500
    seed: int = 0
    size: int = 25
    k: int = 4
    fuel: int = 2000
    refuted_rule: str = "probassoc"
    refuted_trials: int = 2000


@dataclass
class DiagramSuiteConfig:
    core_sets: tuple = CORE_SETS
    extended_sets: tuple = EXTENDED_SETS
    core_trials: int = 200
    extended_trials: int = 100
    seed: int = 0
    size: int = 14


@dataclass
class GeometricConfig:
    expr: str = r"let x = (\y.((x id) <+> K)) in (x id)"
    ks: tuple = tuple(range(1, 11))
    fuel: int = 10_000


@dataclass
class SuiteRow:
    name: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        vals = " ".join(f"{k}={v}" for k, v in self.values.items())
        return f"{self.name:16} {vals} ({self.seconds:.1f}s)"


def fuzz_suite(cfg: FuzzSuiteConfig):
    for rule in cfg.rules:
        t0 = time.time()
        rep = soundness_fuzz(FuzzConfig(rule=rule, trials=cfg.trials, seed=cfg.seed,
                                        size=cfg.size, k=cfg.k, fuel=cfg.fuel))
        row = {"violations": len(rep.violations)}
        if rule in PS_RULES:
            row["same_ps_decided"] = len(rep.decided)
            row["same_ps_holds"] = sum(t.same_ps == (Holds(), Holds()) for t in rep.decided)
        yield SuiteRow(rule, row, time.time() - t0)
    t0 = time.time()
    rep = soundness_fuzz(FuzzConfig(rule=cfg.refuted_rule, trials=cfg.refuted_trials,
                                    seed=cfg.seed, size=cfg.size, k=cfg.k, fuel=cfg.fuel,
                                    bot_rich=True))
    first = rep.violations[0].index if rep.violations else "-"
    yield SuiteRow(cfg.refuted_rule, {"violations": len(rep.violations), "first_trial": first},
                   time.time() - t0)


def diagram_suite(cfg: DiagramSuiteConfig):
    plan = [(s, cfg.core_trials) for s in cfg.core_sets]
    plan += [(s, cfg.extended_trials) for s in cfg.extended_sets]
    for name, n in plan:
        t0 = time.time()
        rep = validate_set(name, n=n, seed=cfg.seed, size=cfg.size)
        hist = rep.histogram()
        top = ",".join(f"{d}:{c}" for d, c in sorted(hist.items(), key=lambda kv: -kv[1])[:4])
        yield SuiteRow(name, {"closed": f"{len(rep.reports) - len(rep.unclosed)}/{n}",
                              "base_failures": len(rep.base_failures), "top": top},
                       time.time() - t0)


def geometric_table(cfg: GeometricConfig):
    e = parse(cfg.expr)
    for k in cfg.ks:
        b = excv_bounds(e, k, cfg.fuel)
        yield k, b, b.lo == 1 - Fraction(1, 2 ** k)


def describe(cfg) -> str:
    return " ".join(f"{k}={v}" for k, v in asdict(cfg).items() if not isinstance(v, tuple))

