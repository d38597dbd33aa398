from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from g2gauge.coeffring import GaussianRational, Poly, ring
from g2gauge.exterior import KForm, basis

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

R_AB = ring(("a", "b"))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussians = st.builds(GaussianRational, rationals, rationals)


@st.composite
def polys(draw, r=R_AB, max_terms=4, max_exp=2):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_exp)) if draw(st.booleans()) else 0 for _ in range(r.nvars))
        terms[e] = draw(rationals)
    return Poly(r, {e: c for e, c in terms.items() if c})


@st.composite
def const_forms(draw, degree, lo=-3, hi=3):
    vals = draw(st.lists(st.integers(lo, hi), min_size=len(basis(degree)), max_size=len(basis(degree))))
    return KForm(degree, {idx: v for idx, v in zip(basis(degree), vals) if v})


@st.composite
def poly_forms(draw, degree, r=R_AB):
    idxs = draw(st.lists(st.sampled_from(basis(degree)), max_size=4, unique=True))
    return KForm(degree, {i: draw(polys(r, max_terms=3)) for i in idxs}, r)


@pytest.fixture(scope="session")
def t2():
    from g2gauge.dbcech import TorusComplex

    return TorusComplex(2)


@pytest.fixture(scope="session")
def t3():
    from g2gauge.dbcech import TorusComplex

    return TorusComplex(3)


def frac(x) -> Fraction:
    return Fraction(x)
