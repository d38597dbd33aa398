"""Local forms, Cech cochains, Deligne-Beilinson cocycles and backgrounds.

Differential forms on a chart are simplicial cochains on the chart's
subcomplex; the wedge product is the cup product and d the simplicial
coboundary.  All values are stored with the factor 2 pi i removed, so
transition functions are rational and the lattice is Z.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from ..errors import InvalidGaugeData
from .complex import ChartSupport, Cover


@dataclass
class LocalForm:
    """A p-cochain with finitely many nonzero values (missing keys are zero)."""

    degree: int
    values: dict = field(default_factory=dict)

    def __call__(self, s: tuple) -> Fraction:
        return self.values.get(s, 0)

    def _combine(self, o: "LocalForm", sign: int) -> "LocalForm":
        if o.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.values)
        for s, v in o.values.items():
            w = out.get(s, 0) + sign * v
            if w:
                out[s] = w
            else:
                out.pop(s, None)
        return LocalForm(self.degree, out)

    def __add__(self, o):
        return self._combine(o, 1)

    def __sub__(self, o):
        return self._combine(o, -1)

    def scale(self, c) -> "LocalForm":
        return LocalForm(self.degree, {s: c * v for s, v in self.values.items() if c * v})

    def restrict(self, vertices: frozenset) -> "LocalForm":
        return LocalForm(self.degree, {s: v for s, v in self.values.items() if all(x in vertices for x in s)})

    def d(self, sup: ChartSupport, t: tuple) -> "LocalForm":
        """Coboundary on the subcomplex L_t."""
        out = {}
        for s in sup.simplices(t, self.degree + 1):
            acc = 0
            for i in range(len(s)):
                v = self.values.get(s[:i] + s[i + 1 :])
                if v:
                    acc += -v if i % 2 else v
            if acc:
                out[s] = acc
        return LocalForm(self.degree + 1, out)

    def is_zero(self) -> bool:
        return not self.values


def constant(c, sup: ChartSupport, t: tuple) -> LocalForm:
    c = Fraction(c)
    return LocalForm(0, {s: c for s in sup.simplices(t, 0)} if c else {})


def cup(a: LocalForm, b: LocalForm, s: tuple) -> Fraction:
    """(a cup b) evaluated on the ordered simplex s."""
    p = a.degree
    return a(s[: p + 1]) * b(s[p:])


def cup_form(a: LocalForm, b: LocalForm, sup: ChartSupport, t: tuple) -> LocalForm:
    out = {}
    for s in sup.simplices(t, a.degree + b.degree):
        v = cup(a, b, s)
        if v:
            out[s] = v
    return LocalForm(a.degree + b.degree, out)


def _perm_sign(t: tuple) -> tuple[int, tuple]:
    """Sign of the sorting permutation (0 on a repeated index) and the sorted tuple."""
    if len(set(t)) != len(t):
        return 0, t
    lst = list(t)
    sign = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


@dataclass
class CechCochain:
    """Totally antisymmetric Cech cochain; values stored on sorted nerve tuples.

    kind is 'int' (integer constants), 'rat' (rational constants) or 'form'
    (LocalForm values of degree form_degree).
    """

    degree: int
    kind: str
    values: dict
    form_degree: int = 0

    def get(self, t: tuple):
        if len(t) != self.degree + 1:
            raise ValueError(f"tuple {t} has wrong length for degree {self.degree}")
        sign, key = _perm_sign(t)
        zero = LocalForm(self.form_degree) if self.kind == "form" else 0
        if sign == 0:
            return zero
        v = self.values.get(key, zero)
        if sign > 0:
            return v
        return v.scale(-1) if self.kind == "form" else -v

    def map(self, f) -> "CechCochain":
        return replace(self, values={t: f(v) for t, v in self.values.items()})

    def add(self, o: "CechCochain") -> "CechCochain":
        if (o.degree, o.kind, o.form_degree) != (self.degree, self.kind, self.form_degree):
            raise ValueError("incompatible cochains")
        out = dict(self.values)
        for t, v in o.values.items():
            out[t] = out[t] + v if t in out else v
        return replace(self, values=out)


def cech_delta(c: CechCochain, cover: Cover, sup: ChartSupport | None = None) -> CechCochain:
    """(delta c)_s = sum_i (-1)^i c_(s without i), restricted to the overlap of s."""
    out = {}
    for s in cover.tuples(c.degree + 2):
        if c.kind == "form":
            acc = LocalForm(c.form_degree)
            vs = sup.vertices(s)
            for i in range(len(s)):
                term = c.get(s[:i] + s[i + 1 :]).restrict(vs)
                acc = acc - term if i % 2 else acc + term
            if not acc.is_zero():
                out[s] = acc
        else:
            acc = sum((-c.get(s[:i] + s[i + 1 :]) if i % 2 else c.get(s[:i] + s[i + 1 :])) for i in range(len(s)))
            if acc:
                out[s] = acc
    return CechCochain(c.degree + 1, c.kind, out, c.form_degree)


def is_zero(c: CechCochain) -> bool:
    if c.kind == "form":
        return all(v.is_zero() for v in c.values.values())
    return all(v == 0 for v in c.values.values())


# ---------------------------------------------------------------- DB classes


@dataclass
class DBClass:
    """Degree-2 Deligne-Beilinson cocycle (A_a, Gamma_ab, Upsilon_abc), 2 pi i removed."""

    A: CechCochain  # degree 0, 1-forms
    Gamma: CechCochain  # degree 1, 0-forms
    Upsilon: CechCochain  # degree 2, integers


@dataclass
class CocycleReport:
    ok: bool
    residuals: dict  # equation -> list of offending tuples
    transition_cocycle: bool

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "transition_cocycle": self.transition_cocycle,
            "residuals": {k: [list(t) for t in v] for k, v in self.residuals.items()},
        }


def db_cocycle_check(c: DBClass, cover: Cover, sup: ChartSupport) -> CocycleReport:
    """Residuals of A_b - A_a = dGamma_ab, delta Gamma = Upsilon, delta Upsilon = 0.

    The transition functions g_ab = exp(-2 pi i Gamma_ab) satisfy the cocycle
    property exactly when (delta Gamma)_abc is an integer constant.
    """
    res: dict = {"A": [], "Gamma": [], "Upsilon": [], "integral": []}
    for t in cover.tuples(2):
        a, b = t
        lhs = (c.A.get((b,)) - c.A.get((a,))).restrict(sup.vertices(t))
        if not (lhs - c.Gamma.get(t).d(sup, t)).is_zero():
            res["A"].append(t)
    dG = cech_delta(c.Gamma, cover, sup)
    transition = True
    for t in cover.tuples(3):
        y = c.Upsilon.get(t)
        if Fraction(y).denominator != 1:
            res["integral"].append(t)
        diff = dG.get(t) - constant(y, sup, t)
        if not diff.is_zero():
            res["Gamma"].append(t)
        vals = {dG.get(t)((v,)) for v in sup.vertices(t)}
        if len(vals) > 1 or any(Fraction(v).denominator != 1 for v in vals):
            transition = False
    dY = cech_delta(c.Upsilon, cover)
    res["Upsilon"] = [t for t, v in dY.values.items() if v]
    ok = not any(res.values())
    return CocycleReport(ok, res, transition)


# ---------------------------------------------------------------- backgrounds


@dataclass
class BackgroundCocycle:
    """Integer Cech q-cocycle theta with its smooth companions.

    tau_s = sum_e theta_(s e) xi_e  (degree q-1, 0-forms)
    chi_s = -sum_e xi_e cup d tau_(s e)  (degree q-2, 1-forms)
    """

    theta: CechCochain
    xi: dict  # chart -> LocalForm of degree 0
    tau: CechCochain | None
    chi: CechCochain | None

    @property
    def q(self) -> int:
        return self.theta.degree


def _contract_xi(c: CechCochain, xi: dict, cover: Cover, sup: ChartSupport, length: int, kind: str):
    """sum_e c_(s e) * xi_e as a cochain of the given length (0-forms)."""
    out = {}
    for s in cover.tuples(length):
        vs = sup.vertices(s)
        vals: dict = {}
        for e, x in xi.items():
            ce = c.get(s + (e,)) if (tuple(sorted(s + (e,))) in cover.nerve or e in s) else 0
            if not ce:
                continue
            for v, w in x.values.items():
                if v[0] in vs:
                    vals[v] = vals.get(v, 0) + ce * w
        vals = {k: v for k, v in vals.items() if v}
        if vals:
            out[s] = LocalForm(0, vals)
    return CechCochain(length - 1, "form", out, 0)


def make_background(theta: CechCochain, xi: dict, cover: Cover, sup: ChartSupport) -> BackgroundCocycle:
    q = theta.degree
    tau = chi = None
    if q >= 1:
        tau = _contract_xi(theta, xi, cover, sup, q, "tau")
    if q >= 2:
        out = {}
        for s in cover.tuples(q - 1):
            acc = LocalForm(1)
            for e, x in xi.items():
                if e in s or tuple(sorted(s + (e,))) not in cover.nerve:
                    continue
                se = s + (e,)
                dt = tau.get(se).d(sup, tuple(sorted(se)))
                acc = acc - cup_form(x, dt, sup, s)
            if not acc.is_zero():
                out[s] = acc
        chi = CechCochain(q - 2, "form", out, 1)
    return BackgroundCocycle(theta, xi, tau, chi)


def background_check(bg: BackgroundCocycle, cover: Cover, sup: ChartSupport) -> dict:
    """Residual tuples of the two defining relations and of delta theta = 0."""
    rebuilt = make_background(bg.theta, bg.xi, cover, sup)
    out = {"theta": [t for t, v in cech_delta(bg.theta, cover).values.items() if v]}
    for name in ("tau", "chi"):
        mine, ref = getattr(bg, name), getattr(rebuilt, name)
        if ref is None:
            out[name] = [] if mine is None or is_zero(mine) else ["unexpected"]
            continue
        keys = set(ref.values) | set((mine.values if mine else {}))
        out[name] = sorted(t for t in keys if not (ref.get(t) - (mine.get(t) if mine else ref.get(t).scale(0))).is_zero())
    out["partition"] = [v for v in sup.cx.simplices[0] if sum(x(v) for x in bg.xi.values()) != 1]
    return out


# ---------------------------------------------------------------- generators


def winding_cochain(cx, axis: int) -> CechCochain:
    """Integer Cech 1-cocycle counting lifted steps along one axis."""
    vals = {}
    for t in cx.cover.tuples(2):
        w = cx.winding(axis, *t)
        if w:
            vals[t] = w
    return CechCochain(1, "int", vals)


def cech_cup(a: CechCochain, b: CechCochain, cover: Cover) -> CechCochain:
    """Ordered cup product of constant cochains, on sorted tuples."""
    p, q = a.degree, b.degree
    vals = {}
    for t in cover.tuples(p + q + 1):
        v = a.get(t[: p + 1]) * b.get(t[p:])
        if v:
            vals[t] = v
    return CechCochain(p + q, a.kind, vals)


def random_int_cochain(cover: Cover, degree: int, rng: random.Random, lo: int = -2, hi: int = 2) -> CechCochain:
    vals = {}
    for t in cover.tuples(degree + 1):
        v = rng.randint(lo, hi)
        if v:
            vals[t] = v
    return CechCochain(degree, "int", vals)


def random_rational(rng: random.Random, den: int = 4, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


def random_local_zero_forms(cover: Cover, sup: ChartSupport, rng: random.Random) -> dict:
    return {a: LocalForm(0, {s: random_rational(rng) for s in sup.simplices((a,), 0)}) for a in cover.index}


def db_class_from_data(
    upsilon: CechCochain,
    xi: dict,
    X: LocalForm,
    h: dict,
    cover: Cover,
    sup: ChartSupport,
) -> DBClass:
    """Gamma = sum_e Upsilon_(ab e) xi_e + h_b - h_a,  A_a = X - sum_e xi_e cup dGamma0_(a e) + dh_a."""
    g0 = _contract_xi(upsilon, xi, cover, sup, 2, "gamma")
    gamma = {}
    for t in cover.tuples(2):
        a, b = t
        vs = sup.vertices(t)
        v = g0.get(t) + (h[b].restrict(vs) - h[a].restrict(vs))
        if not v.is_zero():
            gamma[t] = v
    A = {}
    for a in cover.index:
        t = (a,)
        vs = sup.vertices(t)
        acc = X.restrict(vs) + h[a].d(sup, t)
        for e, x in xi.items():
            if e == a or tuple(sorted((a, e))) not in cover.nerve:
                continue
            dg = g0.get((a, e)).d(sup, tuple(sorted((a, e))))
            acc = acc - cup_form(x, dg, sup, t)
        A[t] = acc
    return DBClass(
        CechCochain(0, "form", A, 1),
        CechCochain(1, "form", gamma, 0),
        upsilon,
    )


def random_db_class(cx, rng: random.Random, upsilon: CechCochain | None = None) -> DBClass:
    """Random class on a TorusComplex: cup of windings plus a random coboundary."""
    cover, sup = cx.cover, cx.support
    if upsilon is None:
        ups = CechCochain(2, "int", {})
        for i, j in combinations(range(cx.m), 2):
            m = rng.randint(-2, 2)
            if m:
                wij = cech_cup(winding_cochain(cx, i), winding_cochain(cx, j), cover)
                ups = ups.add(wij.map(lambda v, m=m: m * v))
        ups = ups.add(cech_delta(random_int_cochain(cover, 1, rng, -1, 1), cover))
        upsilon = CechCochain(2, "int", {t: v for t, v in ups.values.items() if v})
    xi = {a: LocalForm(0, d) for a, d in cx.partition_of_unity.items()}
    X = LocalForm(1, {s: random_rational(rng) for s in cx.L.simplices[1]})
    h = random_local_zero_forms(cover, sup, rng)
    return db_class_from_data(upsilon, xi, X, h, cover, sup)


def zero_db_class(cx) -> DBClass:
    return DBClass(
        CechCochain(0, "form", {}, 1),
        CechCochain(1, "form", {}, 0),
        CechCochain(2, "int", {}),
    )


# ---------------------------------------------------------------- gauge data


@dataclass
class GaugeData:
    """Per-class gauge parameters: 'local' uses 0-forms a_a, 'large' integer z_ab."""

    kind: str
    params: list  # one entry per class; None leaves that class alone


def apply_gauge(c: DBClass, g, cover: Cover, sup: ChartSupport, kind: str) -> DBClass:
    if g is None:
        return c
    if kind == "local":
        A = {}
        for a in cover.index:
            t = (a,)
            A[t] = c.A.get(t) + g[a].restrict(sup.vertices(t)).d(sup, t)
        gam = {}
        for t in cover.tuples(2):
            vs = sup.vertices(t)
            v = c.Gamma.get(t) + (g[t[1]].restrict(vs) - g[t[0]].restrict(vs))
            if not v.is_zero():
                gam[t] = v
        return DBClass(CechCochain(0, "form", A, 1), CechCochain(1, "form", gam, 0), c.Upsilon)
    if kind == "large":
        if g.kind != "int" or g.degree != 1 or any(Fraction(v).denominator != 1 for v in g.values.values()):
            raise InvalidGaugeData("large gauge parameter must be an integer Cech 1-cochain")
        gam = {}
        for t in cover.tuples(2):
            v = c.Gamma.get(t) + constant(g.get(t), sup, t)
            if not v.is_zero():
                gam[t] = v
        ups = c.Upsilon.add(cech_delta(g, cover))
        return DBClass(c.A, CechCochain(1, "form", gam, 0), ups)
    raise InvalidGaugeData(f"unknown gauge kind {kind!r}")
