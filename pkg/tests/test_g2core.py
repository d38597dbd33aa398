from fractions import Fraction

import pytest
from hypothesis import given

from conftest import const_forms
from g2gauge import linalg
from g2gauge.exterior import KForm, basis, contract, hodge, wedge
from g2gauge.g2core import (
    SpinConnection,
    asd_eigen_residual,
    asd_relation_check,
    asd_solution_dimension,
    build_structure,
    eigen_multiplicities,
    lambda2_projectors,
    lambda2_split,
    lambda3_projectors,
    lambda3_split,
    lambda4_projectors,
    lambda4_split,
    t_tensor,
    t_tensor_bruteforce,
)

F = build_structure()


def test_phi0_coefficients():
    assert F.phi0.coeff(1, 2, 3) == 1
    assert F.phi0.coeff(1, 6, 7) == -1
    assert len(F.phi0.terms) == 7


def test_orientation_derived():
    assert F.orientation.sign == 1
    assert eigen_multiplicities(F.orientation) == {-2: 7, -1: 0, 1: 14, 2: 0}


def test_t_tensor_matches_bruteforce():
    t = t_tensor(F)
    assert t.nonzero() == t_tensor_bruteforce(F).nonzero()
    assert t[(1, 2, 1, 2)] == 0


def test_lambda2_examples():
    z = KForm.zero(2)
    assert all(p.is_zero() for p in lambda2_split(z))
    v1 = KForm.e(5, 6) + KForm.e(1, 2)
    b1, b2 = lambda2_split(v1)
    assert b1.is_zero() and b2 == v1


def test_lambda3_lambda4_examples():
    assert lambda3_split(F.phi0) == (F.phi0, KForm.zero(3), KForm.zero(3))
    b = contract(1, F.star_phi0)
    assert lambda3_split(b) == (KForm.zero(3), b, KForm.zero(3))
    assert lambda4_split(F.star_phi0) == (F.star_phi0, KForm.zero(4), KForm.zero(4))
    b = wedge(KForm.e(1), F.phi0)
    assert lambda4_split(b) == (KForm.zero(4), b, KForm.zero(4))


@pytest.mark.parametrize("projs,ranks", [
    (lambda2_projectors, [7, 14]),
    (lambda3_projectors, [1, 7, 27]),
    (lambda4_projectors, [1, 7, 27]),
])
def test_projector_algebra(projs, ranks):
    ps = [list(map(list, p)) for p in projs()]
    n = len(ps[0])
    assert [linalg.rank(p) for p in ps] == ranks
    total = [[sum(p[i][j] for p in ps) for j in range(n)] for i in range(n)]
    assert total == linalg.identity(n)
    for i, p in enumerate(ps):
        for j, q in enumerate(ps):
            prod = linalg.matmul(p, q)
            assert prod == (p if i == j else [[0] * n for _ in range(n)])


def test_lambda4_third_piece_membership():
    for idx in basis(4)[:12]:
        b3 = lambda4_split(KForm.e(*idx))[2]
        assert wedge(F.phi0, b3).is_zero()
        assert wedge(F.phi0, hodge(b3, F.orientation)).is_zero()


def test_asd_relations():
    assert all(not any(r) for r in asd_relation_check(SpinConnection()).values())
    om = SpinConnection({(1, 5, 6): 1, (1, 1, 2): 1})
    assert not any(asd_relation_check(om)[1])
    bad = SpinConnection({(1, 1, 2): 1})
    assert asd_relation_check(bad)[1][0] == 1
    assert asd_solution_dimension() == 14


def test_half_t_is_identity_on_14():
    t = t_tensor(F)
    om = SpinConnection({(1, 5, 6): 1, (1, 1, 2): 1})
    assert all(r.is_zero() for r in asd_eigen_residual(om, t).values())


@given(const_forms(2))
def test_eigenvalue_property(b):
    b1, b2 = lambda2_split(b)
    o = F.orientation
    assert (hodge(wedge(F.phi0, b1), o) + b1 * 2).is_zero()
    assert (hodge(wedge(F.phi0, b2), o) - b2).is_zero()
    assert b1 + b2 == b


@given(const_forms(3))
def test_lambda3_pieces_sum(b):
    assert sum(lambda3_split(b)[1:], lambda3_split(b)[0]) == b


@given(const_forms(2))
def test_t_eigen_relation_on_14(b):
    b2 = lambda2_split(b)[1]
    t = t_tensor(F)
    assert t.contract(b2, Fraction(1, 2)) == b2
