"""Formal calculus of zeta-regularized determinants and formal volumes.

An expression is a rational power product times a product of atoms raised
to rational exponents.  Atoms are det'(c Op | space) with Op one of the
full Laplacian D = d*d + dd*, D' = d*d and D'' = dd*, and formal volumes
Vol(name).  Rewrite rules are applied one at a time and every
application is appended to a trace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..coeffring import as_rational
from ..errors import ParseError, RuleFailure
from .zeta import PowerProduct, ZetaProduct, zeta_product_eval

OPS = ("D", "D'", "D''")
OP_ALIASES = {"D": "D", "D'": "D'", "D''": "D''", "Δ": "D", "Δ′": "D'", "Δ″": "D''", "Δ'": "D'", "Δ''": "D''"}
SPACE_LABELS = {
    "L4_2": "Λ^4_(2)",
    "L1_phi": "Λ^1_φ",
    "L1t_A0": "Λ~^1_A0",
    "L2t_A0": "Λ~^2_A0",
    "L1_A0": "Λ^1_A0",
    "EL2_A0": "EΛ^2_A0",
    "EL2_phi": "EΛ^2_φ",
    "L1_closed": "Λ^1_closed",
}


def plain_degree(space: str) -> int | None:
    m = re.fullmatch(r"L(\d)", space)
    return int(m.group(1)) if m else None


def space_label(space: str) -> str:
    p = plain_degree(space)
    if p is not None:
        return f"Λ^{p}"
    return SPACE_LABELS.get(space, space)


@dataclass(frozen=True, order=True)
class Det:
    op: str
    space: str
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if self.scale <= 0:
            raise ValueError("determinant scale must be positive")

    def __str__(self):
        sc = "" if self.scale == 1 else f"{self.scale}*"
        return f"detp({sc}{self.op}|{self.space})"

    def pretty(self):
        sc = "" if self.scale == 1 else f"{self.scale}"
        sym = {"D": "Δ", "D'": "Δ′", "D''": "Δ″"}[self.op]
        return f"det′({sc}{sym}|{space_label(self.space)})"

    @property
    def background(self) -> bool:
        return "A0" in self.space


@dataclass(frozen=True, order=True)
class Vol:
    name: str

    def __str__(self):
        return f"Vol({self.name})"

    pretty = __str__

    @property
    def background(self) -> bool:
        return "A0" in self.name


def _atom_key(a):
    return (0 if isinstance(a, Det) else 1, str(a))


@dataclass(frozen=True)
class FormalDet:
    """prefactor * prod atom^exp.

    Once ``moduli_integral`` is set, atoms that depend on the background
    A0 are read as sitting under the integral over the background moduli.
    """

    prefactor: PowerProduct = PowerProduct()
    atoms: tuple = ()
    betti: tuple = ()
    moduli_integral: bool = False

    @staticmethod
    def build(prefactor=None, atoms=None, betti=None, moduli_integral=False) -> "FormalDet":
        clean = {a: Fraction(e) for a, e in (atoms or {}).items() if e}
        return FormalDet(prefactor or PowerProduct(), tuple(sorted(clean.items(), key=lambda kv: _atom_key(kv[0]))),
                         tuple(sorted((betti or {}).items())), moduli_integral)

    @staticmethod
    def atom(a, exp=1) -> "FormalDet":
        return FormalDet.build(atoms={a: as_rational(exp)})

    def atom_dict(self) -> dict:
        return dict(self.atoms)

    def betti_dict(self) -> dict:
        return dict(self.betti)

    def exponent(self, a) -> Fraction:
        return self.atom_dict().get(a, Fraction(0))

    def replace(self, **kw) -> "FormalDet":
        d = dict(prefactor=self.prefactor, atoms=self.atom_dict(), betti=self.betti_dict(),
                 moduli_integral=self.moduli_integral)
        d.update(kw)
        return FormalDet.build(**d)

    def __mul__(self, o: "FormalDet") -> "FormalDet":
        at = self.atom_dict()
        for a, e in o.atoms:
            at[a] = at.get(a, 0) + e
        bet = {**self.betti_dict(), **o.betti_dict()}
        return FormalDet.build(self.prefactor * o.prefactor, at, bet, self.moduli_integral or o.moduli_integral)

    def __pow__(self, e) -> "FormalDet":
        e = as_rational(e)
        return self.replace(prefactor=self.prefactor ** e, atoms={a: x * e for a, x in self.atoms})

    def __truediv__(self, o: "FormalDet") -> "FormalDet":
        return self * o ** -1

    def outer(self) -> dict:
        return {a: e for a, e in self.atoms if not (self.moduli_integral and a.background)}

    def inner(self) -> dict:
        return {a: e for a, e in self.atoms if self.moduli_integral and a.background}

    def __str__(self):
        def prod(d):
            return " * ".join(f"{a}^({e})" if e != 1 else str(a) for a, e in d.items())

        head = [str(self.prefactor)] if not self.prefactor.is_one() else []
        if self.outer():
            head.append(prod(self.outer()))
        s = " * ".join(head) or "1"
        if self.moduli_integral:
            s += " * int_Mb[" + (prod(self.inner()) or "1") + "]"
        return s

    def pretty(self) -> str:
        def prod(d):
            return " ".join(f"[{a.pretty()}]^({e})" for a, e in d.items())

        pre = "" if self.prefactor.is_one() else f"{self.prefactor} "
        s = pre + (prod(self.outer()) or "1")
        if self.moduli_integral:
            s += " ∫_{M^b} DA0 DB0^b " + (prod(self.inner()) or "1")
        return s


# ---------------------------------------------------------------- rules

@dataclass
class Trace:
    steps: list = field(default_factory=list)

    def log(self, rule: str, result: FormalDet, note: str = ""):
        self.steps.append({"rule": rule, "note": note, "result": str(result)})

    def rules(self) -> list[str]:
        return [s["rule"] for s in self.steps]


def _rewrite_atom(D: FormalDet, old, new: FormalDet) -> FormalDet:
    """Substitute old -> new (an expression) wherever old occurs."""
    e = D.exponent(old)
    at = D.atom_dict()
    at.pop(old)
    return D.replace(atoms=at) * new ** e


def det_rescale(D: FormalDet, c, p: int, b_p: int) -> FormalDet:
    """det'(s D | L^p) -> c^(-b_p) det'((s/c) D | L^p) for every full-Laplacian atom on L^p."""
    c = as_rational(c)
    if c == 0:
        raise ValueError("scale must be nonzero")
    if c == 1:
        return D
    out = D
    for a, e in D.atoms:
        if isinstance(a, Det) and a.op == "D" and a.space == f"L{p}":
            new = FormalDet.build(prefactor=PowerProduct.of(c, -b_p), atoms={Det("D", a.space, a.scale / c): 1})
            out = _rewrite_atom(out, a, new)
    return out


def _rule_identify(a) -> FormalDet | None:
    if isinstance(a, Det) and a.op == "D'" and a.space == "L4_2":
        return FormalDet.atom(Det("D'", "L1", a.scale))
    return None


def _rule_lower_zero(a) -> FormalDet | None:
    if isinstance(a, Det) and a.op in ("D'", "D") and a.space == "L0" and a.op == "D'":
        return FormalDet.atom(Det("D", "L0", a.scale))
    return None


def _rule_hodge_split(a) -> FormalDet | None:
    p = plain_degree(a.space) if isinstance(a, Det) else None
    if p and a.op == "D'":
        return FormalDet.atom(Det("D", a.space, a.scale)) / FormalDet.atom(Det("D''", a.space, a.scale))
    return None


def _rule_exact_to_coexact(a) -> FormalDet | None:
    p = plain_degree(a.space) if isinstance(a, Det) else None
    if p and a.op == "D''":
        return FormalDet.atom(Det("D'", f"L{p - 1}", a.scale))
    return None


ATOM_RULES: list[tuple[str, str, Callable]] = [
    ("identify-L4_2-with-L1", "det'(c D'|Λ^4_(2)) = det'(c D'|Λ^1)", _rule_identify),
    ("hodge-split", "det'(c D'|Λ^p) = det'(c D|Λ^p) / det'(c D''|Λ^p)", _rule_hodge_split),
    ("d-isomorphism", "det'(c D''|Λ^p) = det'(c D'|Λ^(p-1))", _rule_exact_to_coexact),
    ("functions", "det'(c D'|Λ^0) = det'(c D|Λ^0)", _rule_lower_zero),
]


def normalize(D: FormalDet, trace: Trace | None = None) -> FormalDet:
    """Apply the structural rules and the rescaling rule until nothing changes."""
    trace = trace if trace is not None else Trace()
    changed = True
    while changed:
        changed = False
        for name, desc, rule in ATOM_RULES:
            for a, _ in D.atoms:
                new = rule(a)
                if new is not None:
                    D = _rewrite_atom(D, a, new)
                    trace.log(name, D, f"{a}: {desc}")
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for a, _ in D.atoms:
            p = plain_degree(a.space) if isinstance(a, Det) else None
            if p is not None and a.op == "D" and a.scale != 1:
                betti = D.betti_dict()
                if p not in betti:
                    raise RuleFailure(f"rescale {a}: Betti number b{p} not supplied")
                new = FormalDet.build(prefactor=PowerProduct.of(a.scale, -betti[p]), atoms={Det("D", a.space): 1})
                D = _rewrite_atom(D, a, new)
                trace.log("rescale", D, f"{a}: det'(c D|Λ^p) = c^(-b_p) det'(D|Λ^p) with b{p} = {betti[p]}")
                changed = True
                break
    return D


# ---------------------------------------------------------------- the Z_sc chain

PRINTED_PREFACTOR = Fraction(1, 9)
PRINTED_PATTERN = (
    (Det("D'", "L1_phi"), Fraction(1, 4)),
    (Det("D", "L1"), Fraction(-1, 8)),
    (Det("D", "L0"), Fraction(-3, 8)),
    (Det("D'", "L1t_A0"), Fraction(1, 4)),
    (Det("D'", "L2t_A0", Fraction(9)), Fraction(-1, 8)),
)


@dataclass
class ZscResult:
    expr: FormalDet
    trace: Trace
    ghost_factor: PowerProduct

    @property
    def prefactor(self) -> PowerProduct:
        return self.expr.prefactor

    def exponent_pattern(self) -> tuple:
        return tuple(self.expr.exponent(a) for a, _ in PRINTED_PATTERN)

    def matches_printed_pattern(self) -> bool:
        at = self.expr.atom_dict()
        return (self.exponent_pattern() == tuple(e for _, e in PRINTED_PATTERN)
                and set(at) == {a for a, _ in PRINTED_PATTERN})

    def matches_printed_prefactor(self) -> bool:
        return self.prefactor.rational() == PRINTED_PREFACTOR


def _require(D: FormalDet, wanted: dict, rule: str):
    for a, e in wanted.items():
        if D.exponent(a) != e:
            raise RuleFailure(f"{rule}: expected {a}^({e}), found exponent {D.exponent(a)}")


def assemble_Zsc(b0: int, b1: int) -> ZscResult:
    """Run the rewrite chain from the Gaussian integral to the final Z_sc expression."""
    if b0 < 0 or b1 < 0:
        raise ValueError("Betti numbers are non-negative")
    tr = Trace()
    betti = {0: b0, 1: b1}

    ghost = zeta_product_eval(ZetaProduct(Fraction(2), 1, Fraction(1), Fraction(2)))
    if not ghost.value.is_one():
        raise RuleFailure(f"ghost determinant: prod (2 pi n)^2 evaluated to {ghost.value}, not 1")
    D = FormalDet.build(betti=betti)
    tr.log("ghost-determinant", D, "det'(d/dt | Λ^0(S^1)) = prod_(n>0) (2 pi n)^2 = 1")
    tr.log("zero-mode-reduction", D, "heat-kernel insertion leaves only the zero modes of B^b and BB")

    gauss = FormalDet.build(atoms={
        Det("D'", "L2t_A0", Fraction(9)): Fraction(-1, 4),
        Det("D'", "L4_2", Fraction(9)): Fraction(-1, 4),
        Vol("EL2_A0"): 1,
        Vol("EL2_phi"): 1,
    }) ** Fraction(1, 2)
    D = D * FormalDet.atom(Vol("G"), -1) * gauss
    tr.log("gaussian-integral", D, "quadratic form 3 BB ^ dA0 ^ d(BB ^ phi) on the zero modes")

    e = D.exponent(Vol("EL2_A0"))
    if e != D.exponent(Vol("EL2_phi")):
        raise RuleFailure("exact-form volumes: Vol(EL2_A0) and Vol(EL2_phi) carry different exponents")
    at = D.atom_dict()
    at.pop(Vol("EL2_A0"))
    at.pop(Vol("EL2_phi"))
    repl = FormalDet.build(atoms={
        Vol("L1_A0"): 1, Vol("L1_phi"): 1, Vol("L0"): -2, Vol("H0"): 2, Vol("H1"): -2,
        Det("D'", "L1t_A0"): Fraction(1, 2), Det("D'", "L1_phi"): Fraction(1, 2), Det("D", "L0"): -1,
    })
    D = D.replace(atoms=at) * repl ** e
    tr.log("exact-form-volumes", D, "Vol(EΛ^2_A0) Vol(EΛ^2_φ) via Λ^1 modulo closed forms")

    gp = {Vol("L1_A0"): Fraction(1, 2), Vol("L1_phi"): Fraction(1, 2), Vol("L0"): -1, Vol("G"): -1}
    _require(D, gp, "renormalize-Vol(G')")
    at = D.atom_dict()
    for a in gp:
        at.pop(a)
    D = D.replace(atoms=at, moduli_integral=True)
    tr.log("renormalize-Vol(G')", D, "Vol(G') = [Vol(Λ^1_A0) Vol(Λ^1_φ)]^(1/2) / Vol(Λ^0); Vol(G)/Vol(G') gives the moduli integral")

    h = D.exponent(Vol("H0"))
    if h != -D.exponent(Vol("H1")):
        raise RuleFailure("cohomology volumes do not appear as a ratio")
    at = D.atom_dict()
    at.pop(Vol("H0"), None)
    at.pop(Vol("H1"), None)
    D = D.replace(atoms=at)
    tr.log("renormalize-Vol(H0)/Vol(H1)", D, "Vol(H^0)/Vol(H^1) = 1")

    D = normalize(D, tr)
    tr.log("pull-out-background-free-factors", D, "atoms without A0 dependence leave the moduli integral")
    return ZscResult(D, tr, ghost.value)


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r"\s*(detp\(|Vol\(|\^|\*|/|\(|\)|-?\d+(?:/\d+)?)")


class DetParser:
    """expr := term (('*'|'/') term)*; term := primary ('^' exponent)?

    primary := 'detp(' [rational '*'] op '|' space ')' | 'Vol(' name ')' | rational | '(' expr ')'
    exponent := int | '(' rational ')'
    """

    def __init__(self, text: str, betti: dict | None = None):
        self.s = text
        self.i = 0
        self.betti = betti or {}

    def error(self, msg):
        raise ParseError(msg, self.s, self.i)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.s.startswith(lit, self.i)

    def take(self, lit: str):
        if not self.peek(lit):
            self.error(f"expected {lit!r}")
        self.i += len(lit)

    def rational(self) -> Fraction:
        self.ws()
        m = re.compile(r"-?\d+(?:/\d+)?").match(self.s, self.i)
        if not m:
            self.error("expected a rational number")
        self.i = m.end()
        try:
            return Fraction(m.group())
        except ZeroDivisionError:
            self.error("zero denominator")

    def name(self, stop: str) -> str:
        self.ws()
        j = self.s.find(stop, self.i)
        if j < 0:
            self.error(f"missing {stop!r}")
        out = self.s[self.i : j].strip()
        if not out:
            self.error("empty name")
        self.i = j
        return out

    def parse(self) -> FormalDet:
        e = self.expr()
        self.ws()
        if self.i != len(self.s):
            self.error("unexpected trailing input")
        return e.replace(betti=self.betti)

    def expr(self) -> FormalDet:
        acc = self.term()
        while True:
            if self.peek("*"):
                self.take("*")
                acc = acc * self.term()
            elif self.peek("/"):
                self.take("/")
                acc = acc / self.term()
            else:
                return acc

    def term(self) -> FormalDet:
        base = self.primary()
        if self.peek("^"):
            self.take("^")
            if self.peek("("):
                self.take("(")
                e = self.rational()
                self.take(")")
            else:
                e = self.rational()
            base = base ** e
        return base

    def primary(self) -> FormalDet:
        if self.peek("detp("):
            self.take("detp(")
            scale = Fraction(1)
            start = self.i
            self.ws()
            if re.match(r"\d", self.s[self.i : self.i + 1]):
                scale = self.rational()
                self.take("*")
            op = self.name("|")
            if op not in OP_ALIASES:
                self.i = start
                self.error(f"unknown operator {op!r}")
            self.take("|")
            space = self.name(")")
            self.take(")")
            if scale <= 0:
                self.error("scale must be positive")
            return FormalDet.atom(Det(OP_ALIASES[op], space, scale))
        if self.peek("Vol("):
            self.take("Vol(")
            n = self.name(")")
            self.take(")")
            return FormalDet.atom(Vol(n))
        if self.peek("("):
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        self.ws()
        if self.i < len(self.s) and (self.s[self.i].isdigit()):
            c = self.rational()
            if c <= 0:
                self.error("constants must be positive")
            return FormalDet.build(prefactor=PowerProduct.of(c))
        self.error("expected detp(...), Vol(...), a number or '('")


def parse_det_expr(text: str, betti: dict | None = None) -> FormalDet:
    return DetParser(text, betti).parse()
