"""Truncated Fourier-mode form of the gauge-fixed abelian action on S^1 x M.

Terms are integrals over M of wedge monomials in mode symbols.  Every
symbol carries a form degree and a Grassmann parity, and monomials are
stored in a canonical order with the sign of the reordering absorbed
into the coefficient.  Coefficients are Laurent polynomials in pi with
Gaussian rational coefficients; a separate integer records the power of
the coupling lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

from ..coeffring import GaussianRational
from ..errors import GradingMismatch
from ..linalg import SparseSpan

KINDS = ("A0", "B", "Bb", "BB", "cbar", "c", "phi")
ONE_FORMS = ("B", "Bb", "BB")


@dataclass(frozen=True)
class Factor:
    kind: str
    mode: int = 0
    d: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    @property
    def degree(self) -> int:
        if self.kind == "phi":
            return 3
        if self.kind in ONE_FORMS:
            return 1 + self.d
        if self.kind == "A0":
            return self.d
        return 0

    @property
    def odd(self) -> bool:
        ghost = self.kind in ("c", "cbar")
        return (self.degree + ghost) % 2 == 1

    def key(self):
        return (KINDS.index(self.kind), self.d, self.mode)

    def differentiate(self) -> "Factor | None":
        if self.kind in ("phi",) or self.d:
            return None
        return Factor(self.kind, self.mode, 1)

    def __str__(self):
        base = "d" * self.d + self.kind
        if self.kind in ("A0", "phi"):
            return base
        return f"{base}_{self.mode}"


def B(n, d=0):
    return Factor("B", n, d)


def Bb(n, d=0):
    return Factor("Bb", n, d)


def BB(n, d=0):
    return Factor("BB", n, d)


A0 = Factor("A0")
DA0 = Factor("A0", 0, 1)
PHI = Factor("phi")


def canonical(factors: Iterable[Factor]) -> tuple[int, tuple[Factor, ...]]:
    """Graded-commutative normal order; sign 0 when an odd symbol repeats."""
    fs = list(factors)
    sign = 1
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if fs[i].key() > fs[j].key() and fs[i].odd and fs[j].odd:
                sign = -sign
    out = tuple(sorted(fs, key=Factor.key))
    for a, b in zip(out, out[1:]):
        if a == b and a.odd:
            return 0, ()
    return sign, out


class PiPoly:
    """Finite sum of c_k pi^k with Gaussian rational c_k."""

    __slots__ = ("c",)

    def __init__(self, c: dict | None = None):
        self.c = {k: GaussianRational.coerce(v) for k, v in (c or {}).items() if v}

    @staticmethod
    def const(v, pi: int = 0) -> "PiPoly":
        return PiPoly({pi: v})

    def __add__(self, o: "PiPoly") -> "PiPoly":
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, GaussianRational(0)) + v
        return PiPoly(out)

    def __neg__(self):
        return PiPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o) -> "PiPoly":
        if not isinstance(o, PiPoly):
            return PiPoly({k: v * GaussianRational.coerce(o) for k, v in self.c.items()})
        out: dict = {}
        for k1, v1 in self.c.items():
            for k2, v2 in o.c.items():
                out[k1 + k2] = out.get(k1 + k2, GaussianRational(0)) + v1 * v2
        return PiPoly(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, o):
        return isinstance(o, PiPoly) and self.c == o.c

    def __repr__(self):
        return f"PiPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            v = self.c[k]
            s = f"({v})" if not v.is_real() else str(v.re)
            if k == 1:
                s += "*pi"
            elif k:
                s += f"*pi^{k}"
            parts.append(s)
        return " + ".join(parts)


@dataclass(frozen=True)
class TermKey:
    lam: int
    measure: str  # "M" for a 7-form integrand, "dVol" for a function times the volume form
    factors: tuple

    def __str__(self):
        body = " ^ ".join(map(str, self.factors))
        if self.measure == "dVol":
            body = f"dVol {body}"
        return f"lambda^{self.lam} * int[{body}]"


class SymbolicAction:
    """Formal sum of integrated monomials, keyed by canonical monomial."""

    def __init__(self, terms: dict | None = None):
        self.terms: dict[TermKey, PiPoly] = {}
        for k, v in (terms or {}).items():
            self._add(k, v)

    def _add(self, key: TermKey, coef: PiPoly):
        cur = self.terms.get(key)
        new = coef if cur is None else cur + coef
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    def add(self, coef: PiPoly, factors: Iterable[Factor], lam: int = 0, measure: str = "M"):
        s, fs = canonical(factors)
        if not s or not coef:
            return
        if measure == "M" and sum(f.degree for f in fs) != 7:
            raise GradingMismatch(f"integrand of degree {sum(f.degree for f in fs)}: {' ^ '.join(map(str, fs))}")
        self._add(TermKey(lam, measure, fs), coef * s)

    def copy(self) -> "SymbolicAction":
        return SymbolicAction(dict(self.terms))

    def __add__(self, o: "SymbolicAction") -> "SymbolicAction":
        out = self.copy()
        for k, v in o.terms.items():
            out._add(k, v)
        return out

    def __neg__(self):
        return SymbolicAction({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "SymbolicAction":
        return SymbolicAction({k: v * c for k, v in self.terms.items()})

    def sector(self, lam: int) -> "SymbolicAction":
        return SymbolicAction({k: v for k, v in self.terms.items() if k.lam == lam})

    def where(self, pred) -> "SymbolicAction":
        return SymbolicAction({k: v for k, v in self.terms.items() if pred(k)})

    def lam_powers(self) -> set[int]:
        return {k.lam for k in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o):
        return isinstance(o, SymbolicAction) and self.terms == o.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[TermKey, PiPoly]]:
        return iter(sorted(self.terms.items(), key=lambda kv: str(kv[0])))

    def lines(self) -> list[str]:
        return [f"{v} * {k}" for k, v in self]

    def __str__(self):
        return "\n".join(self.lines()) or "0"


def _modes(N: int) -> range:
    return range(-N, N + 1)


def fourier_reduce(N: int) -> SymbolicAction:
    """Mode expansion of the action, truncated to |n| <= N in every mode index."""
    if N < 0:
        raise ValueError("truncation must be non-negative")
    S = SymbolicAction()
    i4pi = PiPoly.const(GaussianRational(0, 4), 1)
    for n, m in product(_modes(N), repeat=2):
        p = -n - m
        if abs(p) <= N:
            S.add(i4pi * (n + m), [B(n), B(m, 1), B(p), PHI])
    for n in _modes(N):
        S.add(PiPoly.const(3), [A0, B(n, 1), B(-n, 1), PHI])
    for n in _modes(N):
        S.add(PiPoly.const(2 * n, 1), [Factor("cbar", n), Factor("c", n)], measure="dVol")
    return S


# ---------------------------------------------------------------- background split

def _split_factor(f: Factor):
    if f.kind != "B":
        return [(0, f)]
    return [(0, Factor("Bb", f.mode, f.d)), (1, Factor("BB", f.mode, f.d))]


def substitute_background(S: SymbolicAction) -> SymbolicAction:
    """B_n -> Bb_n + lambda BB_n in every term."""
    out = SymbolicAction()
    for key, coef in S.terms.items():
        for choice in product(*(_split_factor(f) for f in key.factors)):
            lam = key.lam + sum(c[0] for c in choice)
            out.add(coef, [c[1] for c in choice], lam=lam, measure=key.measure)
    return out


def printed_sq_bracket(N: int) -> SymbolicAction:
    """The bracket multiplying 3 lambda^2 in the printed split, at truncation N."""
    S = SymbolicAction()
    i4pi = PiPoly.const(GaussianRational(0, 4), 1)
    for n, m in product(_modes(N), repeat=2):
        p = -m - n
        if abs(p) <= N:
            S.add(i4pi * (n + m), [Bb(m), BB(n, 1), BB(p), PHI], lam=2)
    for n in _modes(N):
        S.add(PiPoly.const(1), [A0, BB(n, 1), BB(-n, 1), PHI], lam=2)
    return S


def printed_s_int(N: int) -> SymbolicAction:
    S = SymbolicAction()
    i4pi = PiPoly.const(GaussianRational(0, 4), 1)
    for n, m in product(_modes(N), repeat=2):
        p = -n - m
        if abs(p) <= N:
            S.add(i4pi * (n + m), [BB(n), BB(m, 1), BB(p), PHI], lam=3)
    return S


# ---------------------------------------------------------------- relations

def _leibniz(factors: list[Factor]) -> list[tuple[int, list[Factor]]]:
    """Terms of d(f1 ^ ... ^ fk) with the graded sign."""
    out = []
    sign = 1
    for i, f in enumerate(factors):
        df = f.differentiate()
        if df is not None:
            out.append((sign, factors[:i] + [df] + factors[i + 1 :]))
        if f.degree % 2:
            sign = -sign
    return out


def stokes_relations(N: int, kinds: Iterable[str] = ("Bb", "BB")) -> list[dict]:
    """Exact integrands d(...) ^ phi, as sparse rows over canonical monomials.

    Covers d(X ^ Y ^ Z ^ phi) for 1-form symbols X, Y, Z and
    d(A0 X ^ dY ^ phi), restricted to total mode zero.
    """
    kinds = tuple(kinds)
    syms = [Factor(k, n) for k in kinds for n in _modes(N)]
    rows = []
    for x, y, z in product(syms, repeat=3):
        if x.mode + y.mode + z.mode == 0:
            rows.append([x, y, z, PHI])
    for x, y in product(syms, repeat=2):
        if x.mode + y.mode == 0:
            rows.append([A0, x, Factor(y.kind, y.mode, 1), PHI])
    rels = []
    for fs in rows:
        rel: dict = {}
        for s, t in _leibniz(fs):
            c, key = canonical(t)
            if c:
                rel[key] = rel.get(key, 0) + s * c
        rel = {k: Fraction(v) for k, v in rel.items() if v}
        if rel:
            rels.append(rel)
    return rels


def background_relations(N: int) -> list[dict]:
    """The background equations wedged with a test symbol, total mode zero.

    sum_{m+n=k} dBb_m ^ dBb_n ^ phi = 0 (tested against A0),
    sum_{m+n=k} n dBb_m ^ Bb_n ^ phi = 0 and dA0 ^ dBb_m ^ phi = 0
    (tested against BB_j).
    """
    rels = []
    modes = list(_modes(N))

    def row(terms):
        rel: dict = {}
        for c, fs in terms:
            s, key = canonical(fs)
            if s and c:
                rel[key] = rel.get(key, 0) + Fraction(c * s)
        return {k: v for k, v in rel.items() if v}

    pairs = [(m, n) for m in modes for n in modes]
    r = row([(1, [A0, Bb(m, 1), Bb(n, 1), PHI]) for m, n in pairs if m + n == 0])
    if r:
        rels.append(r)
    for j in modes:
        k = -j
        r = row([(n, [BB(j), Bb(m, 1), Bb(n), PHI]) for m, n in pairs if m + n == k])
        if r:
            rels.append(r)
        r = row([(1, [BB(j), DA0, Bb(-j, 1), PHI])])
        if r:
            rels.append(r)
    return rels


class RelationModule:
    """Span of relations, used to reduce sectors to canonical residues."""

    def __init__(self, relations: Iterable[dict]):
        self.index: dict[tuple, int] = {}
        self.span = SparseSpan()
        for rel in relations:
            self.span.insert({self._col(k): v for k, v in rel.items()})

    def _col(self, key: tuple) -> int:
        if key not in self.index:
            self.index[key] = len(self.index)
        return self.index[key]

    def residual(self, S: SymbolicAction) -> SymbolicAction:
        """S reduced modulo the relations (zero iff S lies in their span)."""
        inv = {}
        meta = {}
        parts: dict = {}
        for key, coef in S.terms.items():
            col = self._col(key.factors)
            meta[col] = key
            for p, v in coef.c.items():
                parts.setdefault(p, {}).setdefault("re", {})[col] = v.re
                parts[p].setdefault("im", {})[col] = v.im
        out = SymbolicAction()
        inv = {c: k for k, c in self.index.items()}
        for p, comp in parts.items():
            for part, vec in comp.items():
                red = self.span.reduce(vec)
                for col, v in red.items():
                    lam = next(iter(meta.values())).lam if meta else 0
                    key = meta.get(col) or TermKey(lam, "M", inv[col])
                    val = GaussianRational(v) if part == "re" else GaussianRational(0, v)
                    out._add(key, PiPoly({p: val}))
        return out


# ---------------------------------------------------------------- split

@dataclass
class BackgroundSplit:
    N: int
    full: SymbolicAction
    sectors: dict
    S_q: SymbolicAction
    S_int: SymbolicAction
    S_gh: SymbolicAction
    lambda2_scalar: Fraction | None
    lambda3_scalar: Fraction | None  # None when the printed sector is empty at this truncation

    def grading(self) -> dict:
        return {"lambda2": self.lambda2_scalar, "lambda3": self.lambda3_scalar,
                "ghost_lambda_power": sorted(self.S_gh.lam_powers())}


def _ratio_mod(u: SymbolicAction, v: SymbolicAction, rels: RelationModule) -> Fraction | None:
    """c with u = c v modulo rels, if it exists and is rational."""
    ru, rv = rels.residual(u), rels.residual(v)
    if rv.is_zero():
        return Fraction(0) if ru.is_zero() else None
    k, cv = next(iter(rv.terms.items()))
    cu = ru.terms.get(k)
    if cu is None:
        return None
    p, gv = next(iter(cv.c.items()))
    gu = cu.c.get(p)
    if gu is None:
        return None
    c = gu / gv
    if not c.is_real():
        return None
    c = c.re
    return c if (ru - rv.scale(c)).is_zero() else None


def background_split(S: SymbolicAction, N: int, check: bool = True) -> BackgroundSplit:
    """Grade S by powers of lambda after B = Bb + lambda BB.

    With ``check`` the sectors are compared against the printed split:
    lambda^3 exactly, lambda^2 as a rational multiple of the printed
    bracket modulo integration by parts on M, the ghost sector at lambda^0.
    """
    full = substitute_background(S)
    sectors = {p: full.sector(p).where(lambda k: k.measure == "M") for p in sorted(full.lam_powers())}
    ghost = full.where(lambda k: k.measure == "dVol")
    S_q, S_int = sectors.get(2, SymbolicAction()), sectors.get(3, SymbolicAction())
    stokes = RelationModule(stokes_relations(N))
    l2 = _ratio_mod(S_q, printed_sq_bracket(N), stokes)
    l3 = _ratio_mod(S_int, printed_s_int(N), RelationModule([])) if not printed_s_int(N).is_zero() else None
    if check:
        if max(full.lam_powers(), default=0) > 3:
            k = next(k for k in full.terms if k.lam > 3)
            raise GradingMismatch(f"unexpected power: {k}")
        bad = [k for k in ghost.terms if k.lam != 0]
        if bad:
            raise GradingMismatch(f"ghost term rescaled: {bad[0]}")
        if not (S_int - printed_s_int(N)).is_zero():
            diff = S_int - printed_s_int(N)
            raise GradingMismatch(f"lambda^3 sector differs: {diff.lines()[:1]}")
        if l2 is None:
            res = stokes.residual(S_q - printed_sq_bracket(N).scale(3))
            raise GradingMismatch(f"lambda^2 sector is not a multiple of the printed bracket: {res.lines()[:1]}")
    return BackgroundSplit(N, full, sectors, S_q, S_int, ghost, l2, l3)


def sector_residual(split: BackgroundSplit, lam: int, impose_background: bool = True) -> SymbolicAction:
    """Sector lam modulo integration by parts and, optionally, the background equations."""
    rels = stokes_relations(split.N)
    if impose_background:
        rels = rels + background_relations(split.N)
    return RelationModule(rels).residual(split.sectors.get(lam, SymbolicAction()))


def resubstitute(split: BackgroundSplit) -> SymbolicAction:
    """S_q + S_int + S_gh at lambda = 1 with the background set to zero, BB renamed to B."""
    out = SymbolicAction()
    for part in (split.S_q, split.S_int, split.S_gh):
        for key, coef in part.terms.items():
            if any(f.kind == "Bb" for f in key.factors):
                continue
            fs = [Factor("B", f.mode, f.d) if f.kind == "BB" else f for f in key.factors]
            out.add(coef, fs, lam=0, measure=key.measure)
    return out
