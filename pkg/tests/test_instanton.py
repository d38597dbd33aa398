from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import const_forms
from g2gauge.coeffring import parse_poly, ring
from g2gauge.errors import DegenerateSample, MismatchWithPrinted
from g2gauge.exterior import KForm, inner, top_coefficient, wedge_all
from g2gauge.g2core import build_structure, lambda2_split
from g2gauge.instanton import (
    alpha_beta_infeasibility_check,
    classify,
    divisible_by_one_form,
    energy_identity_check,
    example_connection,
    exact_ratio,
    float_ratio,
    pointwise_corollary_check,
    presymplectic_integrand_check,
    same_condition_set,
    sd_infeasibility_search,
    step3_inconsistent,
    tangent_check,
    sd_ansatz_step3,
    sd_ansatz_face_target,
    sd_ansatz_target,
    worked_example,
)

F0 = build_structure()
AB = ("a", "b")


def P(s):
    return parse_poly(s, AB)


def test_example_classification():
    v = classify(example_connection()).verdicts
    assert same_condition_set(v["asd_instanton"].polys, [P("b - a - 1")])
    assert same_condition_set(v["asd_higher_order"].polys, [P("-a + b + a*b")])
    assert same_condition_set(v["special"].polys, [P("a"), P("b")])
    assert v["flat"].describe() == "false (identically)"


@pytest.mark.parametrize("a,b,true,false", [
    (0, 1, ["asd_instanton"], ["asd_higher_order"]),
    (1, Fraction(1, 2), ["asd_higher_order"], []),
    (0, 0, ["special", "higher_order_flat"], []),
])
def test_example_substitutions(a, b, true, false):
    rep = classify(example_connection(), params={"a": a, "b": b})
    for k in true:
        assert rep.verdicts[k].value is True
    for k in false:
        assert rep.verdicts[k].value is False
    sym = classify(example_connection()).evaluate({"a": a, "b": b})
    assert {k: sym[k] for k in true + false} == {k: rep.verdicts[k].value for k in true + false}


def test_worked_example_rows():
    rows = {r["name"]: r for r in worked_example(strict=False)}
    assert len(rows) == 8
    assert rows["dB^*phi0"]["match"]
    assert rows["dB^*phi0"]["computed"] == KForm(6, {(2, 3, 4, 5, 6, 7): P("1 + a - b")})
    assert rows["B^dB^*phi0"]["computed"].is_zero()
    assert rows["dB^dB^*phi0"]["computed"].is_zero()
    # the printed top coefficient is half the computed one
    assert not rows["dB^dB^phi0"]["match"]
    assert rows["dB^dB^phi0"]["computed"].coeff(1, 2, 3, 4, 5, 6, 7) == P("-a + b + a*b") * 2
    assert sum(r["match"] for r in rows.values()) == 7


def test_worked_example_strict_raises():
    with pytest.raises(MismatchWithPrinted):
        worked_example()


def test_energy_identity_examples():
    lhs, rhs, ho = energy_identity_check(KForm.zero(2))
    assert lhs == 0 and rhs == 0 and ho.is_zero()


@settings(max_examples=200)
@given(const_forms(2))
def test_energy_identity_iff_higher_order(F):
    lhs, rhs, ho = energy_identity_check(F)
    assert (lhs == rhs) == ho.is_zero()


def test_corollary_pieces():
    F1, F2 = lambda2_split(KForm.e(1, 2) * 3)
    v = top_coefficient(wedge_all(F2, F2, F0.phi0))
    assert v == inner(F2, F2)
    v = top_coefficient(wedge_all(F1, F1, F0.phi0))
    assert v == inner(F1, F1) * -2
    z = pointwise_corollary_check(KForm.zero(2))
    assert z.piece1_identity and z.piece2_identity and z.implies_flat


@given(const_forms(2))
def test_corollary_random(F):
    v = pointwise_corollary_check(F)
    assert v.piece1_identity and v.piece2_identity and v.implies_flat


def test_ratio_exact_vs_float():
    F = KForm.e(1, 2) + KForm.e(3, 4)
    assert abs(float(exact_ratio(F)) - float_ratio(F)) < 1e-12
    with pytest.raises(DegenerateSample):
        exact_ratio(KForm.e(1, 2))


@settings(max_examples=30)
@given(const_forms(2))
def test_ratio_agreement(F):
    try:
        r = exact_ratio(F)
    except DegenerateSample:
        return
    assert abs(float(r) - float_ratio(F)) < 1e-9


def test_search_small():
    res = sd_infeasibility_search(restarts=200, steps=50, seed=1)
    assert res.min_ratio > 1e-2
    assert res.restarts == 200


def test_step3_obstruction():
    assert [str(p) for p in sd_ansatz_step3()] == ["-a4"]
    t = sd_ansatz_target()
    assert len(divisible_by_one_form(t)) == 1  # e1 ^ (printed a ^ b)
    face = sd_ansatz_face_target()
    assert not divisible_by_one_form(face)
    assert step3_inconsistent(face, (3, 4, 5, 6))
    assert not divisible_by_one_form(F0.phi0)
    # a genuine product is divisible
    ab = wedge_all(KForm.e(1) + KForm.e(2), KForm.e(3, 4) + KForm.e(5, 6))
    assert len(divisible_by_one_form(ab)) >= 1


def test_alpha_beta_check():
    r = alpha_beta_infeasibility_check(trials=50, seed=3)
    assert r["ok"]
    assert r["nonzero_samples"] > 0


def test_tangent_check():
    B = example_connection(1, 1)
    closed = KForm(1, {(1,): parse_poly("x1")})
    assert tangent_check(B, closed).is_zero()
    ho = example_connection(1, Fraction(1, 2))
    assert tangent_check(ho, ho).is_zero()
    # a = x1 e2 at a = b = 1 gives zero exactly; a = x6 e7 does not
    assert tangent_check(B, KForm(1, {(2,): parse_poly("x1")})).is_zero()
    r = tangent_check(B, KForm(1, {(7,): parse_poly("x6")}))
    assert r == KForm.e(1, 2, 3, 4, 5, 6, 7) * 4


def _lin(i, j):
    return KForm(1, {(j,): parse_poly(f"x{i}")})


def test_presymplectic():
    consts = [KForm.e(1), KForm.e(2) * 2, KForm.e(5)]
    assert presymplectic_integrand_check(*consts)
    assert presymplectic_integrand_check(_lin(1, 2), _lin(2, 3), _lin(3, 4))


coord = st.integers(1, 7)


@st.composite
def linear_one_forms(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        i, j, c = draw(coord), draw(coord), draw(st.integers(-2, 2))
        p = parse_poly(f"{c}*x{i}")
        terms[(j,)] = terms.get((j,), parse_poly("0")) + p
    return KForm(1, {k: v for k, v in terms.items() if not v.is_zero()})


@settings(max_examples=20)
@given(linear_one_forms(), linear_one_forms(), linear_one_forms())
def test_presymplectic_random(a1, a2, a3):
    assert presymplectic_integrand_check(a1, a2, a3)


@settings(max_examples=40)
@given(linear_one_forms())
def test_classification_implications(B):
    v = {k: x.value for k, x in classify(B).verdicts.items()}
    if v["trivial_special"]:
        assert v["special"]
    if v["flat"]:
        assert v["higher_order_flat"]
    if v["higher_order_flat"]:
        assert v["higher_order"] and v["sd_higher_order"] and v["asd_higher_order"]
    assert v["sd_higher_order"] == v["higher_order_flat"]
