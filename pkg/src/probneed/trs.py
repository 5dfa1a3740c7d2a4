"""Term rewrite systems encoding diagram sets, with KBO/LPO certificate checks."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class TVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(map(str, self.args))})"


Term = Union[TVar, Fn]

_TOK = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*|[(),])")


def parse_term(src: str, variables) -> Term:
    toks = _TOK.findall(src)
    if "".join(toks) != re.sub(r"\s+", "", src):
        raise ValueError(f"bad term {src!r}")
    pos = 0

    def go():
        nonlocal pos
        name = toks[pos]
        pos += 1
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            args = [go()]
            while toks[pos] == ",":
                pos += 1
                args.append(go())
            if toks[pos] != ")":
                raise ValueError(f"bad term {src!r}")
            pos += 1
            return Fn(name, tuple(args))
        return TVar(name) if name in variables else Fn(name)

    t = go()
    if pos != len(toks):
        raise ValueError(f"trailing input in {src!r}")
    return t


def tvars(t: Term) -> list:
    if isinstance(t, TVar):
        return [t.name]
    return [x for a in t.args for x in tvars(a)]


def symbols(t: Term) -> set:
    if isinstance(t, TVar):
        return set()
    return {t.name}.union(*(symbols(a) for a in t.args))


# ---------------------------------------------------------------- systems


@dataclass(frozen=True)
class SymbolicTRS:
    name: str
    variables: tuple
    rules: tuple  # of (lhs, rhs)

    @classmethod
    def from_text(cls, name: str, variables, lines) -> "SymbolicTRS":
        rules = []
        for line in lines:
            l, r = line.split("->")
            rules.append((parse_term(l, variables), parse_term(r, variables)))
        return cls(name, tuple(variables), tuple(rules))

    @property
    def signature(self) -> dict:
        arity = {}
        for l, r in self.rules:
            for t in (l, r):
                _arities(t, arity)
        return arity

    def rhs_only_variables(self) -> list:
        return [i for i, (l, r) in enumerate(self.rules) if set(tvars(r)) - set(tvars(l))]


def _arities(t, acc):
    if isinstance(t, Fn):
        acc.setdefault(t.name, set()).add(len(t.args))
        for a in t.args:
            _arities(a, acc)


_LLL_R1 = [
    "Slll(SRlll(x)) -> x",
    "Slll(SR(x)) -> SR(x)",
    "Slll(SR(x)) -> SR(Slll(x))",
    "Slll(SRlll(x)) -> SRlll(Slll(x))",
    "Slll(SRlll(x)) -> SRlll(Slll(Slll(x)))",
]

_LLL_R2 = [
    "Sllet(SR(x)) -> SR(Sllet(x))",
    "Sllet(SR(x)) -> SRlll(SR(x))",
    "Sllet(SR(x)) -> SR(x)",
    "Sllet(SRlll(x)) -> SRlll(Sllet(x))",
    "Sllet(SRlll(x)) -> SRlll(Slapp(Sllet(x)))",
    "Sllet(SRlll(x)) -> SRlll(SRlll(x))",
    "Slapp(SR(x)) -> SR(Slapp(x))",
    "Slapp(SR(x)) -> SRlll(SR(x))",
    "Sllet(SRlll(x)) -> SRlll(SRlll(SRlll(x)))",
    "Slapp(SR(x)) -> SR(x)",
    "Slapp(SRlll(x)) -> SRlll(Slapp(x))",
    "Slapp(SRlll(x)) -> SRlll(SRlll(x))",
]

# duplicates are kept: one rule per diagram
_CP_R1 = [
    "Scp(SR(x)) -> SR(Scp(x))",
    "Scp(SR(x)) -> SR(Scp(x))",
    "Scp(SR(x)) -> SR(x)",
    "Scp(SR(x)) -> x",
    "Scp(SR(x)) -> SR(Scp(x))",
    "Scp(SR(x)) -> SR(x)",
    "Scp(SR(x)) -> SR(Scp(Scp(x)))",
]

_CP_R2 = [
    "Scpd(SR(x)) -> SR(x)",
    "Scpd(SRlbeta(x)) -> SRlbeta(Scpd(x))",
    "Scpd(SRlbeta(x)) -> SRlbeta(ScpS(x))",
    "Scpd(SR(x)) -> SR(Scpd(x))",
    "Scpd(SR(x)) -> SR(Scpd(Scpd(x)))",
    "ScpS(SRlbeta(x)) -> SRlbeta(ScpS(x))",
    "ScpS(SR(x)) -> SR(x)",
    "ScpS(SRlbeta(x)) -> SR(SRlbeta(x))",
    "ScpS(SR(x)) -> SR(ScpS(x))",
]

_CPX_R = [
    "Scpx(SR(x)) -> SR(x)",
    "Scpx(SR(x)) -> SR(Scpx(x))",
    "Scpx(SR(x)) -> SR(Scpx(Scpx(x)))",
]

_UG_R1 = [
    "Sug(SR(x)) -> SR(x)",
    "Sug(SR(x)) -> SR(Sug(x))",
    "Sug(SRlll(x)) -> SRlll(Sug(x))",
    "Sug(SR(x)) -> Sug(x)",
    "Sug(SRlll(x)) -> W(k,x)",
    "W(s(k),x) -> SRlll(W(k,x))",
    "Sug(SRlll(x)) -> SRlll(Sug(x))",
    "Sug(SRlll(x)) -> Sug(x)",
    "W(s(k),x) -> SRlll(Sug(x))",
]

# W is unary here but binary in R1; transcribed as printed
_UG_R2 = [
    "Sug(SR(x)) -> SR(Sug(x))",
    "Sug(SR(x)) -> SR(x)",
    "Sug(SR(x)) -> SR(SR(Sug(x)))",
    "Sug(SRlll(x)) -> SRlll(Sug(x))",
    "Sug(SR(x)) -> SR(SRlll(Sug(x)))",
    "Sug(SR(x)) -> SRlll(SR(Sug(x)))",
    "Sug(SR(x)) -> SRlll(SR(SR(Sug(x))))",
    "Sug(SRlll(x)) -> SRlll(SRlll(Sug(x)))",
    "Sug(SR(x)) -> SRlll(SR(SRlll(Sug(x))))",
    "Sug(SR(x)) -> SRlll(SRlll(SR(Sug(x))))",
    "Sug(SRlll(SRlll(x))) -> SRlll(Sug(x))",
    "Sug(SRlll(SRlll(x))) -> SRlll(SRlll(SRlll(Sug(x))))",
    "Sug(SR(x)) -> SRlll(SR(SR(SRlll(Sug(x)))))",
    "Sug(SR(x)) -> SRlll(SRlll(SR(SR(Sug(x)))))",
    "Sug(SRlll(W(x))) -> V(k,x)",
    "Sug(SRlll(W(SRlll(x)))) -> Sug(SRlll(W(x)))",
    "Sug(SRlll(SRlll(x))) -> SRlll(SRlll(Sug(x)))",
    "Sug(SRlll(x)) -> SRlll(SRlll(SRlll(Sug(x))))",
    "Sug(SRlll(x)) -> SRlll(V(k,x))",
    "Sug(SRlll(SRlll(x))) -> Sug(SRlll(W(x)))",
    "V(s(k),x) -> SRlll(V(k,x))",
    "V(s(k),x) -> SRlll(SRlll(Sug(x)))",
    "V(s(k),x) -> SRlll(SR(SR(Sug(x))))",
    "V(s(k),x) -> SRlll(SR(Sug(x)))",
    "Sug(SRlll(x)) -> V(k,x)",
    "Sug(SR(x)) -> SRlll(V(k,x))",
    "Sug(SR(x)) -> V(k,x)",
    "Sug(SRlll(W(x))) -> SRlll(SRlll(Sug(x)))",
    "Sug(SRlll(W(x))) -> SRlll(V(k,x))",
    "Sug(SRlll(W(x))) -> SRlll(Sug(x))",
]

SYSTEMS = {
    "lll-R1": SymbolicTRS.from_text("lll-R1", ("x",), _LLL_R1),
    "lll-R2": SymbolicTRS.from_text("lll-R2", ("x",), _LLL_R2),
    "cp-R1": SymbolicTRS.from_text("cp-R1", ("x",), _CP_R1),
    "cp-R2": SymbolicTRS.from_text("cp-R2", ("x",), _CP_R2),
    "cpx-R": SymbolicTRS.from_text("cpx-R", ("x",), _CPX_R),
    "gc-ucp-R1": SymbolicTRS.from_text("gc-ucp-R1", ("x", "k"), _UG_R1),
    "gc-ucp-R2": SymbolicTRS.from_text("gc-ucp-R2", ("x", "k"), _UG_R2),
}


class UnknownSystem(KeyError):
    pass


def get_system(name: str) -> SymbolicTRS:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise UnknownSystem(name) from None


def emit_trs(system) -> str:
    """Plain TPDB text: ``(VAR ...)`` then ``(RULES ...)``, rules in diagram order."""
    trs = get_system(system) if isinstance(system, str) else system
    lines = [f"(VAR {' '.join(trs.variables)})", "(RULES"]
    lines += [f"  {l} -> {r}" for l, r in trs.rules]
    lines.append(")")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- precedences


class InadmissibleOrder(ValueError):
    pass


def precedence(*chains) -> frozenset:
    """Transitive closure of chains like ("Sllet", "Slapp", "SR")."""
    pairs = set()
    for ch in chains:
        pairs |= {(a, b) for a, b in zip(ch, ch[1:])}
    changed = True
    while changed:
        changed = False
        for a, b in list(pairs):
            for c, d in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    if any(a == b for a, b in pairs):
        raise InadmissibleOrder("precedence is cyclic")
    return frozenset(pairs)


@dataclass(frozen=True)
class KboWeights:
    weights: dict
    w0: int = 1

    def of(self, f: str) -> int:
        return self.weights.get(f, self.w0)


def term_weight(t: Term, w: KboWeights) -> int:
    if isinstance(t, TVar):
        return w.w0
    return w.of(t.name) + sum(term_weight(a, w) for a in t.args)


def check_admissible(w: KboWeights, prec: frozenset, arities: dict) -> None:
    if w.w0 <= 0:
        raise InadmissibleOrder("variable weight must be positive")
    for f, ns in arities.items():
        if w.of(f) < 0:
            raise InadmissibleOrder(f"negative weight for {f}")
        if 0 in ns and w.of(f) < w.w0:
            raise InadmissibleOrder(f"constant {f} lighter than variables")
        if 1 in ns and w.of(f) == 0:
            others = [g for g in arities if g != f]
            if not all((f, g) in prec for g in others):
                raise InadmissibleOrder(f"unary {f} of weight 0 is not maximal")


def _var_counts(t: Term) -> dict:
    out = {}
    for x in tvars(t):
        out[x] = out.get(x, 0) + 1
    return out


def _unary_tower(s: Term, x: str) -> bool:
    """s = f(f(...f(x))) for a single unary f, with at least one f."""
    if not isinstance(s, Fn) or len(s.args) != 1:
        return False
    f = s.name
    while isinstance(s, Fn):
        if s.name != f or len(s.args) != 1:
            return False
        s = s.args[0]
    return s == TVar(x)


def kbo_greater(s: Term, t: Term, w: KboWeights, prec: frozenset) -> bool:
    cs, ct = _var_counts(s), _var_counts(t)
    if any(cs.get(x, 0) < n for x, n in ct.items()):
        return False
    ws, wt = term_weight(s, w), term_weight(t, w)
    if ws != wt:
        return ws > wt
    if isinstance(s, TVar):
        return False
    if isinstance(t, TVar):
        return _unary_tower(s, t.name)
    if s.name != t.name:
        return (s.name, t.name) in prec
    for a, b in zip(s.args, t.args):
        if a != b:
            return kbo_greater(a, b, w, prec)
    return False


def lpo_greater(s: Term, t: Term, prec: frozenset) -> bool:
    if isinstance(s, TVar):
        return False
    if isinstance(t, TVar):
        return t.name in tvars(s)
    if any(a == t or lpo_greater(a, t, prec) for a in s.args):
        return True
    if not all(lpo_greater(s, b, prec) for b in t.args):
        return False
    if s.name != t.name:
        return (s.name, t.name) in prec
    for a, b in zip(s.args, t.args):
        if a != b:
            return lpo_greater(a, b, prec)
    return False


# ---------------------------------------------------------------- interpretations
#
# Interpretations over the naturals >= 1 for unary symbols, each either
# linear a*x+b or exponential c**x.  Composite values stay in the class
# a*c**(p*x+q)+b, which is enough to orient string systems.


@dataclass(frozen=True)
class ExpLin:
    """a * c**(p*x + q) + b; c == 1 encodes the linear form a*x + b."""
    a: Fraction
    c: int
    p: int
    q: int
    b: Fraction

    @staticmethod
    def linear(a, b) -> "ExpLin":
        return ExpLin(Fraction(a), 1, 1, 0, Fraction(b))

    @property
    def is_linear(self) -> bool:
        return self.c == 1

    def then(self, fn: "UnaryFn") -> "ExpLin":
        """fn applied on top of this value."""
        if fn.kind == "lin":
            return ExpLin(self.a * fn.a, self.c, self.p, self.q, self.b * fn.a + fn.b)
        if not self.is_linear or self.a.denominator != 1 or self.b.denominator != 1:
            raise ValueError("nested exponentials are not supported")
        return ExpLin(Fraction(1), fn.base, int(self.a), int(self.b), Fraction(0))

    def poly(self) -> dict:
        """Coefficients in y, where y = x (linear) or y = c**x."""
        if self.is_linear:
            return {1: self.a, 0: self.b}
        return {self.p: self.a * Fraction(self.c) ** self.q, 0: self.b}

    def at(self, x: int) -> Fraction:
        if self.is_linear:
            return self.a * x + self.b
        return self.a * Fraction(self.c) ** (self.p * x + self.q) + self.b


@dataclass(frozen=True)
class UnaryFn:
    kind: str  # "lin" or "exp"
    a: int = 1
    b: int = 0
    base: int = 2

    def __str__(self):
        return f"{self.base}^x" if self.kind == "exp" else f"{self.a}x{self.b:+d}"


def _shifted_nonneg(coeffs: dict, y0: int) -> bool:
    """poly(y) > 0 for all integers y >= y0: substitute y = y0 + t, demand nonnegative coefficients."""
    deg = max(coeffs)
    shifted = [Fraction(0)] * (deg + 1)
    for d, c in coeffs.items():
        # (y0 + t)^d
        binom = 1
        for j in range(d + 1):
            shifted[j] += c * binom * Fraction(y0) ** (d - j)
            binom = binom * (d - j) // (j + 1)
    return shifted[0] > 0 and all(c >= 0 for c in shifted[1:])


def interp_greater(l: ExpLin, r: ExpLin) -> bool:
    """l(x) > r(x) for every integer x >= 1, decided for comparable shapes only."""
    if l.c != r.c:
        return False
    diff = dict(l.poly())
    for d, c in r.poly().items():
        diff[d] = diff.get(d, Fraction(0)) - c
    return _shifted_nonneg(diff, 1 if l.c == 1 else l.c)


@dataclass(frozen=True)
class Interpretation:
    """A monotone algebra on the REVERSED string system of a unary TRS.

    Reversal preserves termination, and it lets exponential symbols sit
    innermost where composition stays within ExpLin.
    """
    funcs: dict

    def check_monotone(self) -> None:
        for f, fn in self.funcs.items():
            if fn.kind == "lin" and (fn.a < 1 or fn.a + fn.b < 1):
                raise InadmissibleOrder(f"{f} is not a strictly monotone map on naturals >= 1")
            if fn.kind == "exp" and fn.base < 2:
                raise InadmissibleOrder(f"{f} has base < 2")

    def value(self, t: Term) -> ExpLin:
        word = []
        while isinstance(t, Fn):
            if len(t.args) != 1:
                raise ValueError("interpretations cover unary systems only")
            word.append(t.name)
            t = t.args[0]
        # reversed system: the original outermost letter becomes innermost
        v = ExpLin.linear(1, 0)
        for f in word:
            v = v.then(self.funcs[f])
        return v


def interp_oriented(l: Term, r: Term, interp: Interpretation) -> bool:
    return interp_greater(interp.value(l), interp.value(r))


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Certificate:
    order: str  # "kbo", "lpo" or "interp"
    prec: frozenset = frozenset()
    weights: KboWeights | None = None
    interp: Interpretation | None = None
    note: str = ""

    def orients(self, l: Term, r: Term) -> bool:
        if self.order == "kbo":
            return kbo_greater(l, r, self.weights, self.prec)
        if self.order == "lpo":
            return lpo_greater(l, r, self.prec)
        return interp_oriented(l, r, self.interp)

    def describe(self) -> str:
        if self.order == "interp":
            fs = ", ".join(f"[{f}](x)={fn}" for f, fn in sorted(self.interp.funcs.items()))
            return f"interpretation on reversed system: {fs}"
        prec = ", ".join(f"{a}>{b}" for a, b in sorted(self.prec))
        if self.order == "kbo":
            ws = ", ".join(f"w({f})={n}" for f, n in sorted(self.weights.weights.items()))
            return f"KBO {ws}; {prec}"
        return f"LPO {prec}"


CERTIFICATES = {
    "lll-R1": Certificate("kbo", precedence(("Slll", "SR"), ("Slll", "SRlll")),
                          KboWeights({"Slll": 0, "SR": 1, "SRlll": 1})),
    "lll-R2": Certificate("lpo", precedence(("Sllet", "Slapp", "SR"), ("Slapp", "SRlll")),
                          note="Sllet > SRlll follows by transitivity"),
    "cp-R1": Certificate("kbo", precedence(("Scp", "SR")), KboWeights({"Scp": 0, "SR": 1})),
    "cp-R2": Certificate("interp", interp=Interpretation({
        "Scpd": UnaryFn("lin", 1, 1), "ScpS": UnaryFn("lin", 3, 0),
        "SR": UnaryFn("lin", 3, -2), "SRlbeta": UnaryFn("exp", base=4)}),
        note="no published order; KBO and LPO fail on this system"),
    "cpx-R": Certificate("kbo", precedence(("Scpx", "SR")), KboWeights({"Scpx": 0, "SR": 1})),
}

VERIFIABLE = tuple(CERTIFICATES)


def verify_termination_claim(system: str):
    """Check that every rule of the system is oriented by its certificate."""
    from .equivalence import FailsWith, Holds

    if system not in CERTIFICATES:
        if system in SYSTEMS:
            raise UnknownSystem(f"{system} is emit-only (right-hand-side-only variables)")
        raise UnknownSystem(system)
    trs, cert = SYSTEMS[system], CERTIFICATES[system]
    if cert.order == "kbo":
        check_admissible(cert.weights, cert.prec, {f: ns for f, ns in trs.signature.items()})
    if cert.order == "interp":
        cert.interp.check_monotone()
    for i, (l, r) in enumerate(trs.rules):
        if not cert.orients(l, r):
            return FailsWith((i + 1, f"{l} -> {r}"))
    return Holds(cert.describe())
