import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2gauge import dbcech as db
from g2gauge.dbcech.cochains import LocalForm, random_int_cochain, random_local_zero_forms
from g2gauge.errors import DimensionMismatch, InvalidGaugeData

seeds = st.integers(0, 2**32 - 1)


def total(inst, classes=None, bg=None):
    g = inst.geometry
    return db.action_total(g.P, g.cover, g.support, classes or inst.classes, bg or inst.bg)


# ---------------------------------------------------------------- complex


@pytest.mark.parametrize("fixture,sizes", [("t2", (54, 162, 108)), ("t3", (702, 4590, 7776, 3888))])
def test_subdivision_sizes(request, fixture, sizes):
    cx = request.getfixturevalue(fixture)
    assert tuple(len(cx.L.simplices[p]) for p in range(cx.m + 1)) == sizes


@pytest.mark.parametrize("fixture", ["t2", "t3"])
def test_decomposition_identities(request, fixture):
    cx = request.getfixturevalue(fixture)
    assert cx.P.dd_defects() == []
    assert cx.P.insertion_defects(cx.cover) == []
    assert cx.P.support_defects(cx.support) == []


def test_boundary_squares_to_zero(t2):
    for chain in list(t2.P.chains.values())[:50]:
        assert db.boundary(db.boundary(chain)) == {}


def test_partition_of_unity(t2):
    bg = db.torus_instance(2, 1, 1, cx=t2).bg
    assert db.background_check(bg, t2.cover, t2.support)["partition"] == []


# ---------------------------------------------------------------- Cech algebra


@settings(max_examples=25)
@given(seeds, st.integers(0, 1))
def test_delta_squared_int(t2, seed, deg):
    rng = random.Random(seed)
    c = random_int_cochain(t2.cover, deg, rng)
    assert db.cech_delta(db.cech_delta(c, t2.cover), t2.cover).values == {}


@settings(max_examples=10)
@given(seeds)
def test_delta_squared_forms(t2, seed):
    rng = random.Random(seed)
    f = random_local_zero_forms(t2.cover, t2.support, rng)
    c = db.CechCochain(0, "form", {(a,): v for a, v in f.items()}, 0)
    dd = db.cech_delta(db.cech_delta(c, t2.cover, t2.support), t2.cover, t2.support)
    assert all(v.is_zero() for v in dd.values.values())
    A = db.random_db_class(t2, rng).A
    dd = db.cech_delta(db.cech_delta(A, t2.cover, t2.support), t2.cover, t2.support)
    assert all(v.is_zero() for v in dd.values.values())


@settings(max_examples=5)
@given(seeds)
def test_delta_squared_t3(t3, seed):
    c = random_int_cochain(t3.cover, 1, random.Random(seed))
    assert db.cech_delta(db.cech_delta(c, t3.cover), t3.cover).values == {}


def test_zero_class_passes(t2):
    rep = db.db_cocycle_check(db.zero_db_class(t2), t2.cover, t2.support)
    assert rep.ok and rep.transition_cocycle


def test_random_class_passes(t3):
    c = db.random_db_class(t3, random.Random(5))
    rep = db.db_cocycle_check(c, t3.cover, t3.support)
    assert rep.ok and rep.transition_cocycle


def _perturb(c, pair, bump):
    vals = dict(c.Gamma.values)
    vals[pair] = c.Gamma.get(pair) + bump
    return db.DBClass(c.A, db.CechCochain(1, "form", vals, 0), c.Upsilon)


def test_gamma_perturbation_is_localized(t2):
    c = db.random_db_class(t2, random.Random(1))
    pair = sorted(t2.cover.tuples(2))[3]
    vs = sorted(t2.support.vertices(pair))
    # a non-constant bump breaks A_b - A_a = dGamma_ab on that pair only
    rep = db.db_cocycle_check(_perturb(c, pair, LocalForm(0, {(vs[0],): Fraction(1, 2)})), t2.cover, t2.support)
    assert rep.residuals["A"] == [pair]
    # a constant non-integer shift keeps dGamma but breaks delta Gamma = Upsilon next to the pair
    rep = db.db_cocycle_check(_perturb(c, pair, LocalForm(0, {(v,): Fraction(1, 2) for v in vs})), t2.cover, t2.support)
    assert rep.residuals["A"] == []
    assert rep.residuals["Gamma"]
    assert all(set(pair) <= set(t) for t in rep.residuals["Gamma"])
    assert not rep.transition_cocycle


def test_background_consistency(t3):
    inst = db.torus_instance(3, 2, 1, cx=t3)
    assert not any(db.background_check(inst.bg, t3.cover, t3.support).values())


# ---------------------------------------------------------------- action


def test_pattern_mismatch(t3):
    inst = db.torus_instance(3, 1, 1, cx=t3)
    with pytest.raises(DimensionMismatch):
        total(inst)
    with pytest.raises(DimensionMismatch):
        db.LadderPattern(3, 1, 2)


def test_ladder_pieces():
    assert [p.kind for p in db.ladder_pieces(2, 0)] == ["X", "dX"]
    assert [p.kind for p in db.ladder_pieces(2, 1)] == ["T", "dX"]
    assert [p.kind for p in db.ladder_pieces(2, 2)] == ["Y", "X"]
    assert [p.kind for p in db.ladder_pieces(2, 3)] == ["Y", "T"]


def test_zero_classes_give_zero(t3):
    inst = db.torus_instance(3, 0, 2, cx=t3)
    v = total(inst, classes=[db.zero_db_class(t3)] * 2)
    assert v.total == 0 and all(t == 0 for t in v.terms)


def test_zero_theta_gives_zero(t2):
    inst = db.torus_instance(2, 1, 1, cx=t2)
    bg = db.make_background(db.CechCochain(1, "int", {}), inst.bg.xi, t2.cover, t2.support)
    v = total(inst, bg=bg)
    assert v.total == 0


def test_extra_signs():
    assert db.action.EXTRA_COEFFICIENTS == {"chi": -1, "tau": 1}


def test_extra_terms_nonzero(t3):
    inst = db.torus_instance(3, 2, 1, seed=2, cx=t3)
    v = total(inst)
    assert v.extra["tau"] != 0 or v.extra["chi"] != 0


@pytest.mark.parametrize("m,q,k", [(2, 1, 1), (3, 0, 2), (3, 2, 1)])
def test_oracle_agreement(request, m, q, k):
    cx = request.getfixturevalue(f"t{m}")
    inst = db.torus_instance(m, q, k, seed=7, cx=cx)
    g = inst.geometry
    assert db.action_terms(g.P, g.cover, g.support, inst.classes, inst.bg) == db.brute_force_terms(cx, inst.classes, inst.bg)


def test_oracle_complex_small(t2):
    assert sum(len(t2.L.simplices[p]) for p in range(3)) <= 500


def test_zero_gauge(t2):
    inst = db.torus_instance(2, 1, 1, cx=t2)
    g = inst.geometry
    zero = {a: LocalForm(0) for a in g.cover.index}
    assert db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, db.GaugeData("local", [zero])) == 0
    z = db.CechCochain(1, "int", {})
    assert db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, db.GaugeData("large", [z])) == 0


@settings(max_examples=100)
@given(seeds)
def test_local_gauge_invariance_t2(t2, seed):
    rng = random.Random(seed)
    inst = db.torus_instance(2, 1, 1, seed=seed % 97, cx=t2)
    gd = db.random_gauge(inst.geometry, 1, "local", rng)
    g = inst.geometry
    assert db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, gd) == 0


@settings(max_examples=10)
@given(seeds)
def test_local_gauge_invariance_t3(t3, seed):
    rng = random.Random(seed)
    for q, k in ((0, 2), (2, 1)):
        inst = db.torus_instance(3, q, k, seed=seed % 31, cx=t3)
        gd = db.random_gauge(inst.geometry, k, "local", rng)
        g = inst.geometry
        assert db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, gd) == 0


@settings(max_examples=10)
@given(seeds)
def test_large_gauge_integral(t3, seed):
    rng = random.Random(seed)
    for q, k in ((0, 2), (2, 1)):
        inst = db.torus_instance(3, q, k, seed=seed % 31, cx=t3)
        gd = db.random_gauge(inst.geometry, k, "large", rng)
        g = inst.geometry
        dv = db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, gd)
        assert dv.denominator == 1


def test_large_gauge_rejects_fractions(t2):
    inst = db.torus_instance(2, 1, 1, cx=t2)
    g = inst.geometry
    z = db.CechCochain(1, "rat", {sorted(g.cover.tuples(2))[0]: Fraction(1, 2)})
    with pytest.raises(InvalidGaugeData):
        db.gauge_variation(g.P, g.cover, g.support, inst.classes, inst.bg, db.GaugeData("large", [z]))


# ---------------------------------------------------------------- degrees


def test_cup_degree():
    assert db.cup_degree(2, 1, 2, 1).degree == 4
    assert db.cup_degree(2, 1, 2, 1).weight == 3
    assert db.cup_degree(0, 3, 0, 3).case == "zero"
    r = db.cup_chain([(3, 1), (2, 1), (2, 1), (2, 1)], 8)
    assert r["result"] == [8, 7] and r["R_mod_Z"]


# ---------------------------------------------------------------- io


def test_json_roundtrip(t2):
    inst = db.torus_instance(2, 1, 1, seed=3, cx=t2)
    cj = json.loads(json.dumps(db.complex_to_json(inst.geometry)))
    kj = json.loads(json.dumps(db.cocycles_to_json(inst.classes, inst.bg)))
    g = db.complex_from_json(cj)
    classes, bg = db.cocycles_from_json(kj, g)
    assert db.action_total(g.P, g.cover, g.support, classes, bg).total == total(inst).total
    gd = db.random_gauge(g, 1, "large", random.Random(0))
    back = db.gauge_from_json(json.loads(json.dumps(db.gauge_to_json(gd))))
    assert back.params[0].values == gd.params[0].values


def test_json_rejects_bad_input():
    from g2gauge.errors import ParseError

    with pytest.raises(ParseError):
        db.complex_from_json({"format": "something-else"})
    with pytest.raises(InvalidGaugeData):
        db.gauge_from_json({"format": "g2gauge-dbcech-gauge", "kind": "large", "params": [[[[0, 1], "1/2"]]]})
