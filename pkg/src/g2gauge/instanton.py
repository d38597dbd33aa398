"""Classification of abelian connections on R^7 against the G2 structure.

Every condition is an identity between polynomial forms.  When a
connection carries free parameters, the answer is a short list of
parameter polynomials whose common vanishing is equivalent to the
condition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .coeffring import Poly, PolyRing, as_rational, monomial_key, poly_eval, poly_subs, ring
from .errors import DegenerateSample, MismatchWithPrinted
from .exterior import (
    KForm,
    basis,
    constant_vector,
    contract,
    ext_d,
    hodge,
    inner,
    norm_sq,
    top_coefficient,
    volume,
    wedge,
    wedge_all,
)
from .g2core import FundamentalForm, build_structure, lambda2_projectors, lambda2_split, lambda3_split, lambda4_projectors, lambda4_split


@dataclass(frozen=True)
class Connection1Form:
    B: KForm

    def __post_init__(self):
        if self.B.degree != 1:
            raise ValueError("a connection is a 1-form")

    @property
    def F(self) -> KForm:
        return ext_d(self.B)


# ---------------------------------------------------------------- polynomial conditions

def _param_polys(w: KForm) -> list[Poly]:
    """Split every coefficient by coordinate monomial; keep the parameter parts."""
    out = []
    for c in w.terms.values():
        groups: dict[tuple, dict] = {}
        for e, v in c.terms.items():
            key = e[:7]
            groups.setdefault(key, {})[(0,) * 7 + e[7:]] = v
        out.extend(Poly(c.ring, g) for g in groups.values())
    return out


def _leading(p: Poly) -> tuple:
    return max(p.terms, key=monomial_key)


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce_poly(p: Poly, divisors: Sequence[Poly]) -> Poly:
    """Remainder of multivariate division (graded order)."""
    rem = p.ring.zero()
    q = p
    lead = [(_leading(d), d) for d in divisors if not d.is_zero()]
    while not q.is_zero():
        lt = _leading(q)
        lc = q.terms[lt]
        for le, d in lead:
            if _divides(le, lt):
                shift = tuple(x - y for x, y in zip(lt, le))
                factor = Poly(q.ring, {shift: lc / d.terms[le]})
                q = q - factor * d
                break
        else:
            rem = rem + Poly(q.ring, {lt: lc})
            q = q - Poly(q.ring, {lt: lc})
    return rem


def normalize_poly(p: Poly) -> Poly:
    """Integer coefficients with gcd 1 and positive leading coefficient."""
    from math import gcd, lcm

    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.terms.values()]
    g = 0
    for x in ints:
        g = gcd(g, x)
    scale = Fraction(den, g or 1)
    if p.terms[_leading(p)] < 0:
        scale = -scale
    return p * scale


def simplify_conditions(polys: Sequence[Poly]) -> list[Poly]:
    """Equivalent short generator list: linear elimination, then drop redundant members."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    r = polys[0].ring
    for p in polys[1:]:
        r = r.join(p.ring)
    polys = [p.embed(r) for p in polys]
    monos = sorted({e for p in polys for e in p.terms}, key=monomial_key, reverse=True)
    mat = [[p.terms.get(m, Fraction(0)) for m in monos] for p in polys]
    red, piv = linalg.rref(mat)
    gens = [Poly(r, dict(zip(monos, row))) for row in red[: len(piv)]]
    if any(g.is_constant() for g in gens):
        return [r.const(1)]
    changed = True
    while changed:
        changed = False
        for k in sorted(range(len(gens)), key=lambda k: monomial_key(_leading(gens[k])), reverse=True):
            others = gens[:k] + gens[k + 1 :]
            if others and reduce_poly(gens[k], others).is_zero():
                gens = others
                changed = True
                break
    gens = [normalize_poly(g) for g in gens]
    return sorted(gens, key=lambda g: monomial_key(_leading(g)))


def same_condition_set(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    """Equality of generator lists up to order and nonzero rational scaling."""
    na = sorted(str(normalize_poly(p)) for p in a if not p.is_zero())
    nb = sorted(str(normalize_poly(p)) for p in b if not p.is_zero())
    return na == nb


@dataclass
class Verdict:
    """Either a plain truth value, or parameter polynomials that must vanish."""

    polys: list = field(default_factory=list)
    symbolic: bool = False

    @property
    def value(self):
        if self.symbolic:
            return self.polys
        return not self.polys

    def holds_at(self, assignment: Mapping[str, object]) -> bool:
        return all(poly_eval(p, assignment) == 0 for p in self.polys)

    def describe(self) -> str:
        if not self.symbolic:
            return "true" if not self.polys else "false"
        if not self.polys:
            return "true (identically)"
        if any(p.is_constant() for p in self.polys):
            return "false (identically)"
        return "iff " + ", ".join(f"{p} = 0" for p in self.polys)


def verdict_from_forms(forms: Sequence[KForm]) -> Verdict:
    polys = []
    symbolic = False
    for w in forms:
        if w.ring.params:
            symbolic = True
        polys.extend(_param_polys(w))
    gens = simplify_conditions(polys)
    if not symbolic:
        return Verdict([p for p in gens][:1], symbolic=False)
    return Verdict(gens, symbolic=True)


CONDITIONS = (
    "flat",
    "sd_instanton",
    "asd_instanton",
    "higher_order",
    "higher_order_flat",
    "sd_higher_order",
    "asd_higher_order",
    "special",
    "trivial_special",
)


@dataclass
class ClassificationReport:
    verdicts: dict

    def evaluate(self, assignment: Mapping[str, object]) -> dict[str, bool]:
        return {k: v.holds_at(assignment) if v.symbolic else v.value for k, v in self.verdicts.items()}

    def to_json(self) -> dict:
        out = {}
        for k, v in self.verdicts.items():
            if v.symbolic:
                out[k] = {"kind": "conditions", "polys": [str(p) for p in v.polys]}
            else:
                out[k] = {"kind": "bool", "value": v.value}
        return out


def condition_forms(B: KForm, f: FundamentalForm | None = None) -> dict[str, list[KForm]]:
    """Forms whose vanishing expresses each condition."""
    f = f or build_structure()
    o = f.orientation
    F = ext_d(B)
    F2 = wedge(F, F)
    Fphi = wedge(F, f.phi0)
    BdB = wedge(B, F)
    p2 = lambda4_split(F2)[1]
    return {
        "flat": [F],
        "sd_instanton": [hodge(F, o) + Fphi * Fraction(1, 2)],
        "asd_instanton": [hodge(F, o) - Fphi],
        "higher_order": [wedge(F2, f.phi0)],
        "higher_order_flat": [F2],
        "sd_higher_order": [F2 - p2],
        "asd_higher_order": [wedge(F2, f.phi0), wedge(hodge(F2, o), f.phi0)],
        "special": [wedge(BdB, f.phi0), wedge(BdB, f.star_phi0)],
        "trivial_special": [BdB],
    }


def _restrict(p: Poly, r: PolyRing) -> Poly:
    """Move p into a smaller ring; dropped symbols must not occur."""
    pos = [r.index(n) if n in r.names else None for n in p.ring.names]
    out = {}
    for e, c in p.terms.items():
        ne = [0] * r.nvars
        for k, q in enumerate(pos):
            if e[k]:
                ne[q] = e[k]
        out[tuple(ne)] = c
    return Poly(r, out)


def classify(B, f: FundamentalForm | None = None, params: Mapping[str, object] | None = None) -> ClassificationReport:
    """Verdict for each condition; parameters may be substituted first."""
    if isinstance(B, Connection1Form):
        B = B.B
    if params:
        vals = {k: as_rational(v) for k, v in params.items()}
        rest = tuple(p for p in B.ring.params if p not in vals)
        B = B.map_coeffs(lambda c: poly_subs(c, vals))
        B = KForm(1, {k: _restrict(v, ring(rest)) for k, v in B.terms.items()}, ring(rest))
    forms = condition_forms(B, f)
    return ClassificationReport({k: verdict_from_forms(forms[k]) for k in CONDITIONS})


# ---------------------------------------------------------------- worked example

def example_connection(a=None, b=None) -> KForm:
    """x2 e3 + a x4 e5 + b x6 e7, with a, b symbolic when None."""
    names = tuple(n for n, v in (("a", a), ("b", b)) if v is None)
    r = ring(names)
    av = r.var("a") if a is None else r.const(as_rational(a))
    bv = r.var("b") if b is None else r.const(as_rational(b))
    x = lambda k: r.var(f"x{k}")
    return KForm(1, {(3,): x(2), (5,): av * x(4), (7,): bv * x(6)}, r)


def printed_closed_forms(B: KForm) -> dict[str, KForm]:
    """The eight closed forms as printed, rebuilt in the ring of B."""
    r = B.ring
    a = r.var("a") if "a" in r.params else B.coeff(5).embed(r) * 0 + _param_value(B, 5, 4)
    b = r.var("b") if "b" in r.params else _param_value(B, 7, 6)
    x = lambda k: r.var(f"x{k}")
    K = lambda deg, d: KForm(deg, d, r)
    one = r.const(1)
    return {
        "B^dB": K(3, {(3, 4, 5): a * x(2), (2, 3, 5): a * x(4), (2, 3, 7): b * x(6), (3, 6, 7): b * x(2),
                      (5, 6, 7): a * b * x(4), (4, 5, 7): a * b * x(6)}),
        "dB^dB": K(4, {(2, 3, 4, 5): a * 2, (2, 3, 6, 7): b * 2, (4, 5, 6, 7): a * b * 2}),
        "dB^phi0": K(5, {(1, 2, 3, 4, 5): one + a, (1, 2, 3, 6, 7): b - 1, (1, 4, 5, 6, 7): b - a}),
        "dB^*phi0": K(6, {(2, 3, 4, 5, 6, 7): one + a - b}),
        "B^dB^phi0": K(6, {(1, 3, 4, 5, 6, 7): -(b - a) * x(2), (1, 2, 3, 5, 6, 7): -(a * (b - 1)) * x(4),
                           (1, 2, 3, 4, 5, 7): -(b * (one + a)) * x(6)}),
        "dB^dB^phi0": K(7, {(1, 2, 3, 4, 5, 6, 7): -a + b + a * b}),
        "B^dB^*phi0": K(7, {}),
        "dB^dB^*phi0": K(7, {}),
    }


def _param_value(B: KForm, slot: int, xk: int) -> Poly:
    c = B.coeff(slot)
    r = B.ring
    e = [0] * r.nvars
    e[xk - 1] = 1
    return r.const(c.terms.get(tuple(e), Fraction(0)))


def computed_forms(B: KForm, f: FundamentalForm | None = None) -> dict[str, KForm]:
    f = f or build_structure()
    dB = ext_d(B)
    return {
        "B^dB": wedge(B, dB),
        "dB^dB": wedge(dB, dB),
        "dB^phi0": wedge(dB, f.phi0),
        "dB^*phi0": wedge(dB, f.star_phi0),
        "B^dB^phi0": wedge_all(B, dB, f.phi0),
        "dB^dB^phi0": wedge_all(dB, dB, f.phi0),
        "B^dB^*phi0": wedge_all(B, dB, f.star_phi0),
        "dB^dB^*phi0": wedge_all(dB, dB, f.star_phi0),
    }


def worked_example(a=None, b=None, strict: bool = True) -> list[dict]:
    """Rows (name, computed, expected, match); raises on mismatch when strict."""
    B = example_connection(a, b)
    got = computed_forms(B)
    want = printed_closed_forms(B)
    rows = []
    for name in got:
        diff = got[name] - want[name]
        rows.append({"name": name, "computed": got[name], "expected": want[name], "match": diff.is_zero(),
                     "diff": {k: str(v) for k, v in diff.terms.items()}})
        if strict and not diff.is_zero():
            raise MismatchWithPrinted(name, rows[-1]["diff"])
    return rows


# ---------------------------------------------------------------- identities

def energy_identity_check(F: KForm, f: FundamentalForm | None = None):
    """(2|F|^2, |F ^ phi0|^2, F^2 ^ phi0)."""
    f = f or build_structure()
    o = f.orientation
    Fphi = wedge(F, f.phi0)
    return inner(F, F, o) * 2, inner(Fphi, Fphi, o), wedge_all(F, F, f.phi0)


@dataclass
class CorollaryVerdicts:
    piece1_identity: bool
    piece2_identity: bool
    implies_flat: bool


def pointwise_corollary_check(F: KForm, f: FundamentalForm | None = None) -> CorollaryVerdicts:
    """Check F1^2^phi0 = -2|F1|^2 vol and F2^2^phi0 = |F2|^2 vol for the two pieces of F."""
    f = f or build_structure()
    o = f.orientation
    F1, F2 = lambda2_split(F, f)
    t1 = top_coefficient(wedge_all(F1, F1, f.phi0), o)
    t2 = top_coefficient(wedge_all(F2, F2, f.phi0), o)
    ok1 = t1 == inner(F1, F1, o) * -2
    ok2 = t2 == inner(F2, F2, o)
    # pure type plus higher-order forces F = 0
    pure = F1.is_zero() or F2.is_zero()
    ho = wedge_all(F, F, f.phi0).is_zero()
    flat = (not (pure and ho)) or F.is_zero()
    return CorollaryVerdicts(ok1, ok2, flat)


# ---------------------------------------------------------------- SD infeasibility

def exact_ratio(F: KForm) -> Fraction:
    """|F^2 - P2 F^2|^2 / |F^2|^2 for a constant 2-form."""
    F2 = wedge(F, F)
    if F2.is_zero():
        raise DegenerateSample("F ^ F = 0")
    rest = F2 - lambda4_split(F2)[1]
    return norm_sq(rest).constant_value() / norm_sq(F2).constant_value()


class _RatioModel:
    """Vectorized float version of exact_ratio on coefficient vectors."""

    def __init__(self):
        b2, b4 = basis(2), basis(4)
        q = np.zeros((21, 21, 35))
        for a, ia in enumerate(b2):
            for c, ic in enumerate(b2):
                w = wedge(KForm.e(*ia), KForm.e(*ic))
                for idx, v in w.terms.items():
                    q[a, c, b4.index(idx)] = float(v.constant_value())
        self.q = q.reshape(441, 35)
        p2 = np.array([[float(x) for x in row] for row in lambda4_projectors()[1]])
        self.comp = np.eye(35) - p2

    def square(self, f: np.ndarray) -> np.ndarray:
        outer = np.einsum("na,nb->nab", f, f).reshape(len(f), 441)
        return outer @ self.q

    def ratio_and_grad(self, f: np.ndarray):
        s = self.square(f)
        g = s @ self.comp  # comp is symmetric
        num = np.einsum("nk,nk->n", g, g)
        den = np.einsum("nk,nk->n", s, s)
        q3 = self.q.reshape(21, 21, 35)
        # d s_k / d f_a = 2 sum_b q[a,b,k] f_b  (q symmetric in a, b)
        jac = 2 * np.einsum("abk,nb->nak", q3, f)
        dnum = 2 * np.einsum("nak,nk->na", jac, g)
        dden = 2 * np.einsum("nak,nk->na", jac, s)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = num / den
            grad = (dnum * den[:, None] - num[:, None] * dden) / (den[:, None] ** 2)
        return r, grad, den


_MODEL: _RatioModel | None = None


def ratio_model() -> _RatioModel:
    global _MODEL
    if _MODEL is None:
        _MODEL = _RatioModel()
    return _MODEL


def float_ratio(F: KForm) -> float:
    f = np.array([[float(x) for x in constant_vector(F)]])
    r, _, den = ratio_model().ratio_and_grad(f)
    if den[0] == 0:
        raise DegenerateSample("F ^ F = 0")
    return float(r[0])


@dataclass
class SearchResult:
    min_ratio: float
    argmin: np.ndarray
    degenerate_resamples: int
    restarts: int
    steps: int


def sd_infeasibility_search(restarts: int = 10_000, steps: int = 200, seed: int = 0,
                            step0: float = 0.5, batch: int = 2_000) -> SearchResult:
    """Multi-start projected descent of the complement ratio on the unit sphere.

    Each restart keeps its own step size; a step that fails to decrease
    the ratio is rejected and the step is halved.
    """
    if restarts < 1 or steps < 1:
        raise ValueError("restarts and steps must be positive")
    model = ratio_model()
    rng = np.random.default_rng(seed)
    best, best_f, degenerate = np.inf, None, 0
    done = 0
    while done < restarts:
        n = min(batch, restarts - done)
        f = rng.standard_normal((n, 21))
        f /= np.linalg.norm(f, axis=1, keepdims=True)
        r, grad, den = model.ratio_and_grad(f)
        bad = den < 1e-24
        while bad.any():
            degenerate += int(bad.sum())
            f[bad] = rng.standard_normal((int(bad.sum()), 21))
            f /= np.linalg.norm(f, axis=1, keepdims=True)
            r, grad, den = model.ratio_and_grad(f)
            bad = den < 1e-24
        step = np.full(n, step0)
        for _ in range(steps):
            # project the gradient onto the tangent space of the sphere
            grad -= np.einsum("na,na->n", grad, f)[:, None] * f
            trial = f - step[:, None] * grad
            trial /= np.linalg.norm(trial, axis=1, keepdims=True)
            rt, gt, dt = model.ratio_and_grad(trial)
            accept = (rt < r) & (dt > 1e-24)
            f[accept], r[accept], grad[accept] = trial[accept], rt[accept], gt[accept]
            step[~accept] *= 0.5
        k = int(np.argmin(r))
        if r[k] < best:
            best, best_f = float(r[k]), f[k].copy()
        done += n
    return SearchResult(best, best_f, degenerate, restarts, steps)


# ---------------------------------------------------------------- factorization obstructions

def divisible_by_one_form(w: KForm) -> list[list[Fraction]]:
    """Basis of 1-forms alpha with alpha ^ w = 0 (nonempty iff w = alpha ^ beta)."""
    cols = [constant_vector(wedge(KForm.e(i), w)) for i in range(1, 8)]
    mat = [list(r) for r in zip(*cols)]
    return linalg.nullspace(mat)


def step3_obstruction(target: KForm, quad: Sequence[int]) -> list[Poly]:
    """Consistency conditions of the face equations of a (1-form)^(2-form) ansatz.

    With a = sum a_i e^i and b = sum b_ij e^ij, the coefficient of e^{ijk}
    in a ^ b divided by a_i a_j a_k is linear in u_ij = b_ij/(a_i a_j).
    Scaling every face equation of the index quadruple by the product of
    its four a's gives a rational system with polynomial right-hand side;
    exact elimination returns the polynomials that must vanish for the
    system to be solvable.
    """
    quad = tuple(sorted(quad))
    names = tuple(f"a{i}" for i in quad)
    r = ring(names)
    edges = [(quad[i], quad[j]) for i in range(4) for j in range(i + 1, 4)]
    rows, rhs = [], []
    for m in range(4):
        face = tuple(q for k, q in enumerate(quad) if k != m)
        i, j, k = face
        row = [Fraction(0)] * 6
        row[edges.index((j, k))] += 1
        row[edges.index((i, k))] -= 1
        row[edges.index((i, j))] += 1
        rows.append(row)
        t = target.coeff(*face).constant_value()
        rhs.append(r.var(f"a{quad[m]}") * t)
    # eliminate on the rational part, carrying the polynomial column along
    a = [row[:] for row in rows]
    b = list(rhs)
    piv_row = 0
    for c in range(6):
        p = next((i for i in range(piv_row, 4) if a[i][c]), None)
        if p is None:
            continue
        a[piv_row], a[p] = a[p], a[piv_row]
        b[piv_row], b[p] = b[p], b[piv_row]
        inv = 1 / a[piv_row][c]
        a[piv_row] = [x * inv for x in a[piv_row]]
        b[piv_row] = b[piv_row] * inv
        for i in range(4):
            if i != piv_row and a[i][c]:
                fct = a[i][c]
                a[i] = [x - fct * y for x, y in zip(a[i], a[piv_row])]
                b[i] = b[i] - b[piv_row] * fct
        piv_row += 1
    return [b[i] for i in range(piv_row, 4) if not b[i].is_zero()]


def is_monomial(p: Poly) -> bool:
    return len(p.terms) == 1


def step3_inconsistent(target: KForm, quad: Sequence[int]) -> bool:
    """True when some consistency condition is a nonzero monomial (cannot vanish)."""
    return any(is_monomial(p) for p in step3_obstruction(target, quad))


def find_obstructing_quad(target: KForm, indices: Sequence[int] = range(1, 8)) -> tuple | None:
    """First quadruple (from indices whose a_i are known to be nonzero) with an obstruction."""
    from itertools import combinations

    for quad in combinations(indices, 4):
        if step3_inconsistent(target, quad):
            return quad
    return None


def sd_ansatz_target() -> KForm:
    """Right side of the square identity at the chosen point, as printed."""
    return KForm(4, {(1, 2, 4, 6): -1, (1, 3, 4, 7): -1, (1, 2, 5, 7): 1, (1, 3, 5, 6): -1})


def sd_ansatz_face_target() -> KForm:
    """e1 contracted into the printed square (the printed a ^ b; scale is irrelevant)."""
    return contract(1, sd_ansatz_target())


def sd_ansatz_step3() -> list[Poly]:
    """Consistency conditions of the step-3 system on the quadruple 3456."""
    return step3_obstruction(sd_ansatz_face_target(), (3, 4, 5, 6))


def lemma_cases() -> dict[str, KForm]:
    phi = build_structure().phi0
    x = KForm(3, {(3, 5, 7): 1, (2, 5, 6): 1, (3, 4, 6): 1, (2, 4, 7): -1})
    return {"I": phi + x, "II": phi - x, "III": phi, "IV": x}


def alpha_beta_infeasibility_check(trials: int = 200, seed: int = 0) -> dict:
    """Random sweep plus the four fixed cases; see the module docs for details."""
    rnd = random.Random(seed)
    sweep_ok = True
    nonzero = 0
    for _ in range(trials):
        al = KForm(1, {(i,): rnd.randint(-3, 3) for i in range(1, 8)})
        be = KForm(2, {p: rnd.randint(-3, 3) for p in basis(2)})
        ab = wedge(al, be)
        if ab.is_zero():
            continue
        nonzero += 1
        if lambda3_split(ab)[2].is_zero():
            sweep_ok = False
    cases = {}
    for name, t in lemma_cases().items():
        cases[name] = {
            "divisors": len(divisible_by_one_form(t)),
            "obstructing_quad": find_obstructing_quad(t),
        }
    cases_ok = all(c["divisors"] == 0 and c["obstructing_quad"] is not None for c in cases.values())
    return {"ok": sweep_ok and cases_ok, "sweep_ok": sweep_ok, "nonzero_samples": nonzero, "cases": cases}


# ---------------------------------------------------------------- moduli integrands

def tangent_check(B: KForm, a: KForm, f: FundamentalForm | None = None) -> KForm:
    """Abelian linearized higher-order equation: 2 da ^ dB ^ phi0."""
    f = f or build_structure()
    return wedge_all(ext_d(a), ext_d(B), f.phi0) * 2


def presymplectic_sides(a1: KForm, a2: KForm, a3: KForm, f: FundamentalForm | None = None,
                        B: KForm | None = None) -> tuple[KForm, KForm]:
    """Both sides of the closedness computation, specialized to U(1).

    The left side keeps every term of the expansion, including the
    B-terms (which cancel pairwise for commuting coefficients).
    """
    f = f or build_structure()
    d = ext_d
    W = wedge_all
    lhs = (W(d(a1), a2, a3) - W(d(a2), a1, a3) + W(d(a3), a1, a2)
           - W(d(a1), a3, a2) + W(d(a2), a3, a1) - W(d(a3), a2, a1))
    if B is not None:
        lhs = lhs + (W(B, a1, a2, a3) + W(a1, B, a2, a3) - W(B, a1, a3, a2) - W(a1, B, a3, a2)
                     - W(B, a2, a1, a3) - W(a2, B, a1, a3) + W(B, a2, a3, a1) + W(a2, B, a3, a1)
                     + W(B, a3, a1, a2) + W(a3, B, a1, a2) - W(B, a3, a2, a1) - W(a3, B, a2, a1))
    rhs = d(wedge(wedge(a1, a2) - wedge(a2, a1), a3))
    return wedge(lhs, f.phi0), wedge(rhs, f.phi0)


def presymplectic_integrand_check(a1: KForm, a2: KForm, a3: KForm, f: FundamentalForm | None = None,
                                  B: KForm | None = None) -> bool:
    lhs, rhs = presymplectic_sides(a1, a2, a3, f, B)
    return (lhs - rhs).is_zero()
