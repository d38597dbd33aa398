from hypothesis import given
from hypothesis import strategies as st

from conftest import R_AB, const_forms, poly_forms
from g2gauge.coeffring import parse_poly
from g2gauge.exterior import (
    KForm,
    Orientation,
    contract,
    ext_d,
    hodge,
    inner,
    volume,
    wedge,
)
from g2gauge.g2core import build_structure
from g2gauge.instanton import example_connection


def e(*idx):
    return KForm.e(*idx)


def test_wedge_basis():
    assert wedge(e(1), e(2)) == e(1, 2)
    assert wedge(e(2), e(1)) == -e(1, 2)
    assert wedge(e(1), e(1)).is_zero()


def test_example_bdb_vanishes_at_zero():
    B = example_connection(0, 0)
    assert wedge(B, ext_d(B)).is_zero()


def test_d_examples():
    x2e3 = KForm(1, {(3,): parse_poly("x2")})
    assert ext_d(x2e3) == e(2, 3)
    B = example_connection()
    a, b = parse_poly("a", ("a", "b")), parse_poly("b", ("a", "b"))
    want = KForm(2, {(2, 3): 1, (4, 5): a, (6, 7): b}, R_AB)
    assert ext_d(B) == want
    assert ext_d(ext_d(B)).is_zero()


def test_hodge_examples():
    for s in (1, -1):
        o = Orientation(s)
        assert hodge(KForm.scalar(1), o) == volume(o)
        assert hodge(e(1), o) == e(2, 3, 4, 5, 6, 7) * s


def test_contract_and_inner():
    assert contract(1, e(1, 2)) == e(2)
    assert contract(3, e(1, 2)).is_zero()
    assert inner(e(1), e(1)) == 1
    assert inner(e(1), e(2)) == 0
    phi = build_structure().phi0
    assert inner(phi, phi) == 7


def test_sign_normalization():
    assert e(2, 1) == -e(1, 2)
    assert (e(1, 2) + e(2, 1)).is_zero()


degrees = st.integers(0, 7)


@given(degrees.flatmap(lambda p: st.tuples(st.just(p), st.integers(0, 7 - p))).flatmap(
    lambda pq: st.tuples(poly_forms(pq[0]), poly_forms(pq[1]))))
def test_graded_commutativity(pair):
    w, h = pair
    assert wedge(w, h) == wedge(h, w) * (-1) ** (w.degree * h.degree)


@given(st.integers(0, 5).flatmap(poly_forms))
def test_dd_zero(w):
    assert ext_d(ext_d(w)).is_zero()


@given(st.integers(1, 3).flatmap(lambda p: st.tuples(poly_forms(p), poly_forms(3))), st.integers(1, 7))
def test_contract_antiderivation(pair, i):
    w, h = pair
    lhs = contract(i, wedge(w, h))
    rhs = wedge(contract(i, w), h) + wedge(w, contract(i, h)) * (-1) ** w.degree
    assert lhs == rhs


@given(st.integers(0, 7).flatmap(lambda p: st.tuples(const_forms(p), const_forms(p))), st.sampled_from([1, -1]))
def test_hodge_isometry_and_involution(pair, s):
    w, h = pair
    o = Orientation(s)
    assert inner(w, h, o) == inner(hodge(w, o), hodge(h, o), o)
    assert hodge(hodge(w, o), o) == w


@given(st.integers(0, 7).flatmap(poly_forms))
def test_forms_store_no_zeros(w):
    assert all(not c.is_zero() for c in w.terms.values())
    assert all(len(k) == w.degree for k in w.terms)
