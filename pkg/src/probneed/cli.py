"""Command-line surface: ``probneed <command> ...``.

Exit codes: 0 on success or Holds, 1 on FailsWith / counterexample / violation,
2 on usage and parse errors.  Inconclusive results exit 0 with a warning.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import diagrams, trs
from .convergence import (FrontierError, excv_scaled, explore, fmt,
                          frontier_evaluate, full_frontier)
from .ctors import DEFAULT_TABLE, CtorTable
from .equivalence import (FailsWith, FuzzConfig, Holds, Inconclusive, counterexample_search,
                          frontier_criteria_check, same_prob_sequences_check, soundness_fuzz)
from .reduction import ChoicesExhausted, FuelExhausted, ReachedStuck, ReachedWhnf, reduce_trace
from .text import ParseError, parse, show
from .transform import CLASSES, UnknownRule, apply, match_sites

OK, FAILS, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, lines) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _verdict_code(v, args, payload: dict, lines) -> int:
    if isinstance(v, Inconclusive):
        print(f"warning: inconclusive ({v.reason})", file=sys.stderr)
    _emit(args, payload, lines)
    return FAILS if isinstance(v, FailsWith) else OK


def _verdict_name(v) -> str:
    return type(v).__name__


def _expr(args, src: str):
    return parse(src, args.table, extended=args.extended)


# ---------------------------------------------------------------- commands

def cmd_eval(args) -> int:
    e = _expr(args, args.expr)
    if args.choices is not None:
        rep = reduce_trace(e, args.choices, args.fuel)
        out = rep.outcome
        kind = {ReachedWhnf: "whnf", ReachedStuck: "stuck", FuelExhausted: "fuel-exhausted",
                ChoicesExhausted: "choices-exhausted"}[type(out)]
        payload = {"outcome": kind, "expr": show(out.expr), "consumed": rep.consumed,
                   "trace": list(rep.trace), "fuel": args.fuel, "choices": args.choices}
        lines = [f"{kind}: {show(out.expr)}"]
        if args.trace:
            lines.append("trace: " + " ".join(rep.trace))
        _emit(args, payload, lines)
        return OK
    tree = explore(e, args.max_prob, args.fuel)
    leaves, lines = [], []
    for leaf in tree.leaves():
        leaves.append({"probseq": leaf.probseq, "weight": fmt(leaf.weight), "kind": leaf.kind,
                       "expr": show(leaf.expr), "trace": list(leaf.trace)})
        lines.append(f"{leaf.probseq or '-'} {fmt(leaf.weight)} {leaf.kind} {show(leaf.expr)}")
        if args.trace:
            lines.append("  trace: " + " ".join(_path_trace(tree.node, leaf.probseq)))
    _emit(args, {"leaves": leaves, "k": args.max_prob, "fuel": args.fuel}, lines)
    return OK


def _path_trace(node, word: str) -> list:
    out = []
    for c in word:
        out.extend(node.trace)
        out.append("probl" if c == "L" else "probr")
        node = node.left if c == "L" else node.right
    return out + list(node.trace)


def cmd_excv(args) -> int:
    b = excv_scaled(Fraction(args.weight), _expr(args, args.expr), args.max_prob, args.fuel)
    payload = {"lo": fmt(b.lo), "hi": fmt(b.hi), "exact": b.exact, "counts": b.counts,
               "k": args.max_prob, "fuel": args.fuel, "weight": args.weight}
    _emit(args, payload, [str(b)])
    return OK


def cmd_transform(args) -> int:
    e = _expr(args, args.expr)
    ms = match_sites(e, args.rule, args.cls, args.extended)
    if args.site is None:
        rows = [{"index": i, "rule": m.rule, "site": list(map(str, m.site)),
                 "result": show(apply(e, m))} for i, m in enumerate(ms)]
        lines = [f"{r['index']} {r['rule']} {'/'.join(r['site']) or 'root'} -> {r['result']}"
                 for r in rows]
        _emit(args, {"matches": rows, "rule": args.rule, "class": args.cls}, lines)
        return OK
    if not 0 <= args.site < len(ms):
        raise UsageError(f"site index {args.site} out of range ({len(ms)} matches)")
    m = ms[args.site]
    r = show(apply(e, m))
    _emit(args, {"rule": m.rule, "site": list(map(str, m.site)), "result": r}, [r])
    return OK


def _words(args) -> list:
    if args.words:
        return args.words.split(",")
    return full_frontier(args.depth)


def cmd_frontier(args) -> int:
    try:
        res = frontier_evaluate(_expr(args, args.expr), _words(args), args.relaxed, args.fuel)
    except FrontierError as exc:
        print(f"frontier: {exc}", file=sys.stderr)
        return FAILS
    rows = [{"weight": fmt(q), "expr": show(t)} for q, t in res]
    _emit(args, {"entries": rows, "relaxed": args.relaxed},
          [f"{r['weight']} {r['expr']}" for r in rows])
    return OK


def cmd_equiv(args) -> int:
    s, t = _expr(args, args.expr1), _expr(args, args.expr2)
    if args.criterion == "same-ps":
        verdicts = [same_prob_sequences_check(s, t, args.max_prob, args.fuel),
                    same_prob_sequences_check(t, s, args.max_prob, args.fuel)]
    else:
        crit = "EqCr" + args.criterion[-1]
        words = _words(args) if args.words or args.depth else full_frontier(args.max_prob)
        try:
            fs = frontier_evaluate(s, words, args.relaxed, args.fuel)
            ft = frontier_evaluate(t, words, args.relaxed, args.fuel)
        except FrontierError as exc:
            print(f"frontier: {exc}", file=sys.stderr)
            return FAILS
        verdicts = [frontier_criteria_check(fs, ft, crit, k=args.max_prob, fuel=args.fuel),
                    frontier_criteria_check(ft, fs, crit, k=args.max_prob, fuel=args.fuel)]
    v = _combine(verdicts)
    payload = {"criterion": args.criterion, "forward": _verdict_name(verdicts[0]),
               "backward": _verdict_name(verdicts[1]), "verdict": _verdict_name(v),
               "k": args.max_prob, "fuel": args.fuel}
    lines = [f"forward: {_describe(verdicts[0])}", f"backward: {_describe(verdicts[1])}"]
    return _verdict_code(v, args, payload, lines)


def _combine(vs):
    for v in vs:
        if isinstance(v, FailsWith):
            return v
    for v in vs:
        if isinstance(v, Inconclusive):
            return v
    return Holds()


def _describe(v) -> str:
    if isinstance(v, FailsWith):
        w = v.witness
        if isinstance(w, tuple) and len(w) == 2:
            w = f"{fmt(Fraction(w[0]))} {show(w[1])}"
        return f"FailsWith {w}"
    if isinstance(v, Inconclusive):
        return f"Inconclusive {v.reason}"
    return "Holds"


def cmd_counterexample(args) -> int:
    s, t = _expr(args, args.expr1), _expr(args, args.expr2)
    v = counterexample_search(s, t, args.ctx_budget, args.max_prob, args.fuel, args.cls)
    payload = {"verdict": _verdict_name(v), "k": args.max_prob, "fuel": args.fuel,
               "ctx_budget": args.ctx_budget}
    if isinstance(v, FailsWith):
        r = v.witness
        ctx = show(r.context, short=True)
        payload.update(witness=ctx, left=[fmt(r.left.lo), fmt(r.left.hi)],
                       right=[fmt(r.right.lo), fmt(r.right.hi)])
        lines = [f"witness: {ctx}",
                 f"left: [{fmt(r.left.lo)},{fmt(r.left.hi)}] right: [{fmt(r.right.lo)},{fmt(r.right.hi)}]"]
    else:
        lines = [f"no refuting context within budget {args.ctx_budget}"]
    return _verdict_code(v, args, payload, lines)


def cmd_fuzz(args) -> int:
    cfg = FuzzConfig(rule=args.rule, cls=args.cls, trials=args.trials, seed=args.seed,
                     size=args.size, k=args.max_prob, fuel=args.fuel, extended=args.extended,
                     bot_rich=args.bot_rich)
    rep = soundness_fuzz(cfg)
    summary = rep.summary()
    summary.update(k=cfg.k, fuel=cfg.fuel, size=cfg.size)
    lines = [t.record() for t in rep.trials] if args.verbose else []
    lines.append(f"rule={cfg.rule} trials={summary['trials']} skipped={summary['skipped']} "
                 f"violations={summary['violations']} same_ps_failures={summary['same_ps_failures']}")
    _emit(args, summary, lines)
    return FAILS if rep.violations or rep.same_ps_failures else OK


def cmd_diagram_check(args) -> int:
    try:
        names = [n for n in diagrams.resolve_sets(args.set)
                 if diagrams.SETS[n].kind == args.mode]
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if not names:
        raise UsageError(f"set {args.set} has no {args.mode} diagrams")
    ds = diagrams.SETS[names[0]]
    if ds.extended and not args.extended:
        raise UsageError(f"set {ds.name} needs --extended")
    rep = diagrams.validate_set(ds.name, args.trials, args.seed)
    lines = rep.records() if args.verbose else []
    hist = rep.histogram()
    lines.append(f"set={ds.name} trials={len(rep.reports)} unclosed={len(rep.unclosed)} "
                 f"base_failures={len(rep.base_failures)} "
                 + " ".join(f"{k}:{v}" for k, v in sorted(hist.items())))
    payload = {"set": ds.name, "seed": args.seed, "trials": len(rep.reports),
               "unclosed": len(rep.unclosed), "base_failures": len(rep.base_failures),
               "histogram": hist, "records": rep.records()}
    _emit(args, payload, lines)
    return FAILS if rep.unclosed or rep.base_failures else OK


def cmd_trs(args) -> int:
    try:
        system = trs.get_system(args.system)
    except trs.UnknownSystem as exc:
        raise UsageError(f"unknown system {exc}") from None
    if args.action == "emit":
        sys.stdout.write(trs.emit_trs(system))
        return OK
    try:
        v = trs.verify_termination_claim(args.system)
    except trs.UnknownSystem as exc:
        raise UsageError(str(exc)) from None
    payload = {"system": args.system, "verdict": _verdict_name(v)}
    if isinstance(v, Holds):
        payload["certificate"] = v.note
        lines = [f"Holds: {v.note}"]
    else:
        payload["rule"] = list(map(str, v.witness))
        lines = [f"FailsWith: rule {v.witness[0]}: {v.witness[1]}"]
    return _verdict_code(v, args, payload, lines)


# ---------------------------------------------------------------- parser

def _parser() -> argparse.ArgumentParser:
    def globals_(p, default):
        # subcommands repeat the global flags; SUPPRESS keeps them from resetting the top level
        kw = {} if default else {"default": argparse.SUPPRESS}
        p.add_argument("--extended", action="store_true", help="enable constructors, case, seq", **kw)
        p.add_argument("--ctors", metavar="FILE", help="constructor table file", **kw)
        p.add_argument("--json", action="store_true", help="machine-readable output", **kw)

    common = argparse.ArgumentParser(add_help=False)
    globals_(common, default=False)

    def bounds(p, k=4, fuel=1000):
        p.add_argument("--max-prob", type=int, default=k, metavar="K")
        p.add_argument("--fuel", type=int, default=fuel, metavar="N")

    ap = argparse.ArgumentParser(prog="probneed",
                                 description="Workbench for probabilistic call-by-need.")
    globals_(ap, default=True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate and print the tree leaves")
    p.add_argument("expr")
    bounds(p)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--choices", metavar="LR...")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("excv", parents=[common], help="expected-convergence interval")
    p.add_argument("expr")
    bounds(p)
    p.add_argument("--weight", default="1", metavar="P")
    p.set_defaults(run=cmd_excv)

    p = sub.add_parser("transform", parents=[common], help="list or apply transformation sites")
    p.add_argument("expr")
    p.add_argument("--rule", required=True)
    p.add_argument("--class", dest="cls", choices=CLASSES, default="C")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--site", type=int, metavar="INDEX")
    g.add_argument("--list", action="store_true")
    p.set_defaults(run=cmd_transform)

    def frontier_opts(p, required):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--depth", type=int, metavar="D")
        g.add_argument("--words", metavar="W,W,...")
        p.add_argument("--relaxed", action="store_true")

    p = sub.add_parser("frontier", parents=[common], help="evaluate along a frontier")
    p.add_argument("expr")
    frontier_opts(p, True)
    p.add_argument("--fuel", type=int, default=1000, metavar="N")
    p.set_defaults(run=cmd_frontier)

    p = sub.add_parser("equiv", parents=[common], help="bounded equivalence criteria")
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.add_argument("--criterion", choices=("same-ps", "eqcr1", "eqcr2", "eqcr3"), required=True)
    bounds(p)
    frontier_opts(p, False)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("counterexample", parents=[common], help="search a refuting context")
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.add_argument("--ctx-budget", type=int, default=7, metavar="B")
    p.add_argument("--class", dest="cls", choices=CLASSES, default="C")
    bounds(p, k=2, fuel=50)
    p.set_defaults(run=cmd_counterexample)

    p = sub.add_parser("fuzz", parents=[common], help="soundness fuzzing of one rule")
    p.add_argument("--rule", required=True)
    p.add_argument("--class", dest="cls", choices=CLASSES, default="S")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=25)
    p.add_argument("--bot-rich", action="store_true")
    p.add_argument("--verbose", action="store_true")
    bounds(p, k=4, fuel=2000)
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("diagram-check", parents=[common], help="validate a diagram set")
    p.add_argument("--set", required=True)
    p.add_argument("--mode", choices=("fork", "commute"), required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(run=cmd_diagram_check)

    p = sub.add_parser("trs", parents=[common], help="emit or verify a diagram TRS")
    p.add_argument("action", choices=("emit", "verify"))
    p.add_argument("--system", required=True)
    p.set_defaults(run=cmd_trs)
    return ap


def main(argv=None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    try:
        args.table = CtorTable.load(args.ctors) if args.ctors else DEFAULT_TABLE
        if args.ctors:
            args.extended = True
        return args.run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, UnknownRule, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
