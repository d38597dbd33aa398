"""JSON exchange format for complexes, cocycles and gauge data, plus test instances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..errors import InvalidGaugeData, ParseError
from .cochains import (
    BackgroundCocycle,
    CechCochain,
    DBClass,
    GaugeData,
    LocalForm,
    cech_cup,
    make_background,
    random_db_class,
    random_int_cochain,
    random_local_zero_forms,
    winding_cochain,
)
from .complex import ChartSupport, Cover, PolyDecomp, RefComplex, TorusComplex

COMPLEX_FORMAT = "g2gauge-dbcech-complex"
COCYCLE_FORMAT = "g2gauge-dbcech-cocycles"
GAUGE_FORMAT = "g2gauge-dbcech-gauge"
VERSION = 1


@dataclass
class Geometry:
    """Everything the engine needs about the base: cover, subdivision, pieces."""

    n: int
    cover: Cover
    support: ChartSupport
    P: PolyDecomp
    L: RefComplex


def geometry_of(cx: TorusComplex) -> Geometry:
    return Geometry(cx.m, cx.cover, cx.support, cx.P, cx.L)


def _rat(x) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {x!r}") from e


def _form_to_json(f: LocalForm) -> list:
    return [[list(s), str(v)] for s, v in sorted(f.values.items())]


def _form_from_json(deg: int, rows) -> LocalForm:
    vals = {}
    for s, v in rows:
        s = tuple(s)
        if len(s) != deg + 1:
            raise ParseError(f"simplex {list(s)} has wrong size for a {deg}-form")
        v = _rat(v)
        if v:
            vals[s] = v
    return LocalForm(deg, vals)


def _cochain_to_json(c: CechCochain) -> list:
    if c.kind == "form":
        return [[list(t), _form_to_json(v)] for t, v in sorted(c.values.items())]
    return [[list(t), str(v)] for t, v in sorted(c.values.items())]


def _cochain_from_json(rows, degree: int, kind: str, form_degree: int = 0) -> CechCochain:
    vals = {}
    for t, v in rows:
        t = tuple(t)
        if len(t) != degree + 1:
            raise ParseError(f"tuple {list(t)} has wrong length for a Cech {degree}-cochain")
        key = tuple(sorted(t))
        sign = 1
        lst = list(t)
        for i in range(len(lst)):
            for j in range(len(lst) - 1 - i):
                if lst[j] > lst[j + 1]:
                    lst[j], lst[j + 1] = lst[j + 1], lst[j]
                    sign = -sign
        if kind == "form":
            val = _form_from_json(form_degree, v).scale(sign)
        else:
            val = sign * _rat(v)
            if kind == "int":
                if val.denominator != 1:
                    raise ParseError(f"non-integer value {v} in an integer cochain")
                val = int(val)
        vals[key] = val
    return CechCochain(degree, kind, vals, form_degree)


# ---------------------------------------------------------------- complexes


def complex_to_json(g: Geometry) -> dict:
    top = g.L.simplices[g.n]
    return {
        "format": COMPLEX_FORMAT,
        "version": VERSION,
        "dimension": g.n,
        "simplices": [list(s) for s in top],
        "charts": {str(a): sorted(g.support.vertex_sets[a]) for a in g.cover.index},
        "nerve": [list(t) for t in sorted(g.cover.nerve)],
        "chains": [
            {"tuple": list(t), "terms": [[c, list(s)] for s, c in sorted(ch.items())]}
            for t, ch in sorted(g.P.chains.items())
        ],
    }


def complex_from_json(d: dict) -> Geometry:
    if d.get("format") != COMPLEX_FORMAT:
        raise ParseError(f"expected format {COMPLEX_FORMAT!r}")
    try:
        n = int(d["dimension"])
        simp: dict[int, set] = {p: set() for p in range(n + 1)}
        for s in d["simplices"]:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                for f in combinations(s, k):
                    simp[k - 1].add(f)
        L = RefComplex(n, {p: list(v) for p, v in simp.items()})
        charts = {int(a): frozenset(v) for a, v in d["charts"].items()}
        cover = Cover(tuple(sorted(charts)), frozenset(tuple(sorted(t)) for t in d["nerve"]))
        chains = {}
        for e in d["chains"]:
            chains[tuple(e["tuple"])] = {tuple(s): int(c) for c, s in e["terms"] if int(c)}
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed complex file: {e}") from e
    return Geometry(n, cover, ChartSupport(L, charts), PolyDecomp(n, chains), L)


# ---------------------------------------------------------------- cocycles


def cocycles_to_json(classes: list[DBClass], bg: BackgroundCocycle) -> dict:
    out = {
        "format": COCYCLE_FORMAT,
        "version": VERSION,
        "theta": {"degree": bg.theta.degree, "values": _cochain_to_json(bg.theta)},
        "xi": {str(a): _form_to_json(x) for a, x in bg.xi.items()},
        "classes": [
            {"A": _cochain_to_json(c.A), "Gamma": _cochain_to_json(c.Gamma), "Upsilon": _cochain_to_json(c.Upsilon)}
            for c in classes
        ],
    }
    if bg.tau is not None:
        out["tau"] = _cochain_to_json(bg.tau)
    if bg.chi is not None:
        out["chi"] = _cochain_to_json(bg.chi)
    return out


def cocycles_from_json(d: dict, g: Geometry) -> tuple[list[DBClass], BackgroundCocycle]:
    if d.get("format") != COCYCLE_FORMAT:
        raise ParseError(f"expected format {COCYCLE_FORMAT!r}")
    try:
        q = int(d["theta"]["degree"])
        theta = _cochain_from_json(d["theta"]["values"], q, "int")
        xi = {int(a): _form_from_json(0, v) for a, v in d["xi"].items()}
        classes = [
            DBClass(
                _cochain_from_json(c["A"], 0, "form", 1),
                _cochain_from_json(c["Gamma"], 1, "form", 0),
                _cochain_from_json(c["Upsilon"], 2, "int"),
            )
            for c in d["classes"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed cocycle file: {e}") from e
    bg = make_background(theta, xi, g.cover, g.support)
    if "tau" in d:
        bg.tau = _cochain_from_json(d["tau"], q - 1, "form", 0)
    if "chi" in d:
        bg.chi = _cochain_from_json(d["chi"], q - 2, "form", 1)
    return classes, bg


def gauge_to_json(g: GaugeData) -> dict:
    params = []
    for p in g.params:
        if p is None:
            params.append(None)
        elif g.kind == "local":
            params.append({str(a): _form_to_json(f) for a, f in p.items()})
        else:
            params.append(_cochain_to_json(p))
    return {"format": GAUGE_FORMAT, "version": VERSION, "kind": g.kind, "params": params}


def gauge_from_json(d: dict) -> GaugeData:
    if d.get("format") != GAUGE_FORMAT:
        raise ParseError(f"expected format {GAUGE_FORMAT!r}")
    kind = d.get("kind")
    params = []
    for p in d.get("params", []):
        if p is None:
            params.append(None)
        elif kind == "local":
            params.append({int(a): _form_from_json(0, f) for a, f in p.items()})
        elif kind == "large":
            rows = [(t, v) for t, v in p]
            if any(_rat(v).denominator != 1 for _, v in rows):
                raise InvalidGaugeData("large gauge parameter must be integer valued")
            params.append(_cochain_from_json(rows, 1, "int"))
        else:
            raise InvalidGaugeData(f"unknown gauge kind {kind!r}")
    return GaugeData(kind, params)


# ---------------------------------------------------------------- instances


def standard_theta(cx: TorusComplex, q: int) -> CechCochain:
    """Unit background: 1 for q = 0, a winding cocycle for q = 1, a cup of windings for q = 2."""
    if q == 0:
        return CechCochain(0, "int", {(a,): 1 for a in cx.cover.index})
    if q > cx.m:
        raise ValueError("background degree exceeds the dimension")
    th = winding_cochain(cx, 0)
    for ax in range(1, q):
        th = cech_cup(th, winding_cochain(cx, ax), cx.cover)
    return th


@dataclass
class Instance:
    cx: TorusComplex
    geometry: Geometry
    classes: list
    bg: BackgroundCocycle


def torus_instance(m: int, q: int, k: int, seed: int = 0, N: int = 3, cx: TorusComplex | None = None) -> Instance:
    cx = cx or TorusComplex(m, N)
    rng = random.Random(seed)
    classes = [random_db_class(cx, rng) for _ in range(k)]
    xi = {a: LocalForm(0, v) for a, v in cx.partition_of_unity.items()}
    bg = make_background(standard_theta(cx, q), xi, cx.cover, cx.support)
    return Instance(cx, geometry_of(cx), classes, bg)


def random_gauge(g: Geometry, k: int, kind: str, rng: random.Random) -> GaugeData:
    if kind == "local":
        return GaugeData("local", [random_local_zero_forms(g.cover, g.support, rng) for _ in range(k)])
    return GaugeData("large", [random_int_cochain(g.cover, 1, rng) for _ in range(k)])
