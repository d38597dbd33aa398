"""Ladder of Cech-de Rham terms for a cup product theta * X_0 * ... * X_(k-1).

theta is an integer Cech q-cocycle, each X_c a degree-2 DB class, and the
base has dimension n = q + 2k - 1.  Term I_j lives on the pieces P_t with
len(t) = q + j + 1.  Writing j = 2i + r, class c enters as

    c < i      its integer part Upsilon_c      (Cech degree 2)
    c = i      A_c if r = 0, Gamma_c if r = 1  (Cech degree 0 or 1)
    c > i      its curvature dA_c              (Cech degree 0)

The Cech pieces are laid out right to left: theta on the last q + 1
indices, then class 0, class 1, ... ending at the first index, and the
forms are multiplied in class order.  I_j carries the sign (-1)^j.  The
total action adds -dA_0 ... dA_(k-1) chi and +dA_0 ... dA_(k-1) tau.
All values are rational (2 pi i factored out) and the lattice is Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DimensionMismatch
from .cochains import BackgroundCocycle, DBClass, GaugeData, LocalForm, apply_gauge
from .complex import ChartSupport, Cover, PolyDecomp


@dataclass(frozen=True)
class Piece:
    kind: str  # 'Y', 'T', 'X', 'dX'
    cls: int
    cech: int
    form: int


def ladder_pieces(k: int, j: int) -> list[Piece]:
    i, r = divmod(j, 2)
    out = []
    for c in range(k):
        if c < i:
            out.append(Piece("Y", c, 2, 0))
        elif c == i:
            out.append(Piece("X", c, 0, 1) if r == 0 else Piece("T", c, 1, 0))
        else:
            out.append(Piece("dX", c, 0, 2))
    return out


def ladder_layout(q: int, k: int, j: int, t: tuple) -> tuple[tuple, list[tuple]]:
    """Index spans of theta and of each class piece inside the tuple t."""
    pieces = ladder_pieces(k, j)
    pos = len(t) - 1 - q
    theta_span = t[pos:]
    spans = []
    for p in pieces:
        spans.append(t[pos - p.cech : pos + 1])
        pos -= p.cech
    if pos != 0:
        raise DimensionMismatch("ladder layout does not exhaust the tuple")
    return theta_span, spans


@dataclass
class LadderPattern:
    n: int
    q: int
    k: int

    def __post_init__(self):
        if self.n != self.q + 2 * self.k - 1:
            raise DimensionMismatch(
                f"dimension {self.n} does not equal q + 2k - 1 = {self.q + 2 * self.k - 1} for q={self.q}, k={self.k}"
            )

    @property
    def terms(self) -> int:
        return 2 * self.k

    def piece_dim(self, j: int) -> int:
        return self.n - self.q - j


class _Curvatures:
    def __init__(self, classes, sup: ChartSupport):
        self.classes, self.sup, self.cache = classes, sup, {}

    def __call__(self, c: int, a: int) -> LocalForm:
        key = (c, a)
        if key not in self.cache:
            self.cache[key] = self.classes[c].A.get((a,)).d(self.sup, (a,))
        return self.cache[key]


def _check_inputs(P: PolyDecomp, classes, bg: BackgroundCocycle) -> LadderPattern:
    return LadderPattern(P.n, bg.q, len(classes))


def _evaluate(pieces, spans, classes, curv, f: tuple) -> Fraction:
    val = Fraction(1)
    cur = 0
    for p, sp in zip(pieces, spans):
        cl = classes[p.cls]
        if p.kind == "Y":
            v = cl.Upsilon.get(sp)
        elif p.kind == "T":
            v = cl.Gamma.get(sp)(f[cur : cur + 1])
        elif p.kind == "X":
            v = cl.A.get(sp)(f[cur : cur + 2])
            cur += 1
        else:
            v = curv(p.cls, sp[0])(f[cur : cur + 3])
            cur += 2
        if not v:
            return Fraction(0)
        val *= v
    return val


def action_terms(P: PolyDecomp, cover: Cover, sup: ChartSupport, classes: list[DBClass], bg: BackgroundCocycle) -> list[Fraction]:
    """I_0 ... I_(2k-1) as exact rationals."""
    pat = _check_inputs(P, classes, bg)
    curv = _Curvatures(classes, sup)
    out = []
    for j in range(pat.terms):
        pieces = ladder_pieces(pat.k, j)
        total = Fraction(0)
        for t in cover.tuples(pat.q + j + 1):
            chain = P.chain(t)
            if not chain:
                continue
            th_span, spans = ladder_layout(pat.q, pat.k, j, t)
            th = bg.theta.get(th_span)
            if not th:
                continue
            for f, coef in chain.items():
                total += coef * th * _evaluate(pieces, spans, classes, curv, f)
        out.append(total if j % 2 == 0 else -total)
    return out


def extra_terms(P: PolyDecomp, cover: Cover, sup: ChartSupport, classes: list[DBClass], bg: BackgroundCocycle) -> dict:
    """-sum <dA_0..dA_(k-1) chi, P> and +sum <dA_0..dA_(k-1) tau, P>.

    The background factor is multiplied last.  In front it would be read at
    the barycenter of t itself, where every xi_e with e outside t vanishes,
    so both terms would be identically zero on the subdivision.
    """
    pat = _check_inputs(P, classes, bg)
    curv = _Curvatures(classes, sup)
    out = {"chi": Fraction(0), "tau": Fraction(0)}
    for name, comp, sign in (("chi", bg.chi, -1), ("tau", bg.tau, 1)):
        if comp is None:
            continue
        for t, form in comp.values.items():
            for f, coef in P.chain(t).items():
                v = Fraction(coef)
                for c in range(pat.k):
                    v *= curv(c, t[0])(f[2 * c : 2 * c + 3])
                    if not v:
                        break
                if v:
                    out[name] += sign * v * form(f[2 * pat.k :])
    return out


@dataclass
class ActionValue:
    terms: list
    extra: dict

    @property
    def total(self) -> Fraction:
        return sum(self.terms, Fraction(0)) + self.extra["chi"] + self.extra["tau"]

    @property
    def mod_lattice(self) -> Fraction:
        return self.total % 1

    def to_json(self) -> dict:
        return {
            "terms": [str(x) for x in self.terms],
            "chi_term": str(self.extra["chi"]),
            "tau_term": str(self.extra["tau"]),
            "total": str(self.total),
            "mod_Z": str(self.mod_lattice),
        }


def action_total(P, cover, sup, classes, bg) -> ActionValue:
    return ActionValue(action_terms(P, cover, sup, classes, bg), extra_terms(P, cover, sup, classes, bg))


EXTRA_COEFFICIENTS = {"chi": -1, "tau": 1}


def gauge_variation(P, cover, sup, classes: list[DBClass], bg, g: GaugeData) -> Fraction:
    """S(after) - S(before) for a local or large gauge transformation."""
    if len(g.params) != len(classes):
        raise DimensionMismatch("one gauge parameter per class is required")
    moved = [apply_gauge(c, p, cover, sup, g.kind) for c, p in zip(classes, g.params)]
    return action_total(P, cover, sup, moved, bg).total - action_total(P, cover, sup, classes, bg).total


# ---------------------------------------------------------------- oracle


def brute_force_terms(cx, classes: list[DBClass], bg: BackgroundCocycle) -> list[Fraction]:
    """Direct summation over every simplex of the subdivision.

    Each simplex is weighted by its dual-cell coefficient recomputed from
    the lifted geometry, and every local form is evaluated from its raw
    cochain values, curvatures included.
    """
    n, q, k = cx.m, bg.q, len(classes)
    LadderPattern(n, q, k)
    out = []
    for j in range(2 * k):
        d = n - q - j
        pieces = ladder_pieces(k, j)
        total = Fraction(0)
        for f in cx.L.simplices.get(d, []):
            coef = cx.coefficient(f)
            if not coef:
                continue
            t = cx.faces[f[0]]
            if len(t) != q + j + 1:
                continue
            pos = len(t) - 1 - q
            th = bg.theta.get(t[pos:])
            val = Fraction(coef * th)
            cur = 0
            for p in pieces:
                sp = t[pos - p.cech : pos + 1]
                pos -= p.cech
                cl = classes[p.cls]
                if p.kind == "Y":
                    val *= cl.Upsilon.get(sp)
                elif p.kind == "T":
                    val *= cl.Gamma.get(sp)((f[cur],))
                elif p.kind == "X":
                    val *= cl.A.get(sp)((f[cur], f[cur + 1]))
                    cur += 1
                else:
                    form = cl.A.get(sp)
                    e = f[cur : cur + 3]
                    val *= form((e[1], e[2])) - form((e[0], e[2])) + form((e[0], e[1]))
                    cur += 2
            total += val
        out.append(total if j % 2 == 0 else -total)
    return out


# ---------------------------------------------------------------- DB degrees


@dataclass(frozen=True)
class CupDegree:
    case: str
    degree: int | None
    weight: int | None

    def to_json(self) -> dict:
        return {"case": self.case, "degree": self.degree, "weight": self.weight}


def cup_degree(q: int, l: int, t: int, j: int) -> CupDegree:
    """Target of H^q(Z(l)) x H^t(Z(j)) under the DB cup product."""
    w = l + j + 1
    if (q == l + 1 and t <= j + 1) or (t == j + 1 and q <= l + 1):
        return CupDegree("1", q + t, w)
    if (q >= l + 2 and t <= j + 1) or (t >= j + 2 and q <= l + 1):
        return CupDegree("2", q + t - 1, w)
    if q >= l + 2 and t >= j + 2:
        return CupDegree("3", q + t, w)
    return CupDegree("zero", None, None)


def cup_chain(classes: list[tuple[int, int]], dim: int) -> dict:
    """Fold cup_degree left to right; report whether the result is R/Z on a closed dim-manifold."""
    steps = []
    q, l = classes[0]
    for t, j in classes[1:]:
        r = cup_degree(q, l, t, j)
        steps.append({"left": [q, l], "right": [t, j], **r.to_json()})
        if r.degree is None:
            return {"steps": steps, "result": None, "R_mod_Z": False}
        q, l = r.degree, r.weight
    return {"steps": steps, "result": [q, l], "R_mod_Z": q == dim and l == dim - 1}
