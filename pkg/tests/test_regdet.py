from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2gauge.coeffring import GaussianRational
from g2gauge.errors import ParseError, UnsupportedPattern
from g2gauge.regdet import (
    Det,
    FormalDet,
    PowerProduct,
    Trace,
    ZetaProduct,
    assemble_Zsc,
    background_split,
    det_rescale,
    fourier_reduce,
    normalize,
    parse_det_expr,
    parse_zeta_product,
    resubstitute,
    sector_residual,
    zeta_product_eval,
)
from g2gauge.regdet.modes import A0, PHI, B, Factor, PiPoly, TermKey, canonical


def coef(S, factors, measure="M", lam=0):
    _, fs = canonical(factors)
    return S.terms.get(TermKey(lam, measure, fs))


def test_ghost_coefficients():
    S = fourier_reduce(2)
    for n in (1, 2, -1):
        got = coef(S, [Factor("cbar", n), Factor("c", n)], "dVol")
        assert got == PiPoly.const(2 * n, 1)


def test_triple_term_coefficient():
    # B_0 ^ dB_1 ^ B_-1 with weight 4 pi i (0 + 1); moving B_-1 to the front costs a sign
    S = fourier_reduce(1)
    assert coef(S, [B(-1), B(0), B(1, 1), PHI]) == PiPoly.const(GaussianRational(0, -4), 1)


def test_truncation_zero():
    S = fourier_reduce(0)
    assert len(S) == 1
    assert coef(S, [A0, B(0, 1), B(0, 1), PHI]) == PiPoly.const(3)


@pytest.mark.parametrize("N", [0, 1, 2])
def test_truncation_embeds(N):
    small, big = fourier_reduce(N), fourier_reduce(N + 1)
    assert set(small.terms) <= set(big.terms)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_background_split(N):
    sp = background_split(fourier_reduce(N), N)
    g = sp.grading()
    assert g["lambda2"] == 3
    assert g["ghost_lambda_power"] == [0]
    assert sector_residual(sp, 1).is_zero()
    assert not sector_residual(sp, 1, impose_background=False).is_zero()
    assert resubstitute(sp) == fourier_reduce(N)


def test_zeta_examples():
    z = zeta_product_eval(parse_zeta_product("prod(2*pi*n)^2"))
    assert z.rational == 1
    assert zeta_product_eval(parse_zeta_product("prod(3)")).value == PowerProduct.of(3, Fraction(-1, 2))
    assert zeta_product_eval(parse_zeta_product("prod(n)")).value == PowerProduct.of(2, Fraction(1, 2), pi=1)
    with pytest.raises(UnsupportedPattern):
        parse_zeta_product("sum(n)")


@given(st.integers(-5, 5))
def test_zeta_trivial_products(m):
    assert zeta_product_eval(ZetaProduct(Fraction(1), 0, Fraction(0), Fraction(m))).rational == 1


def test_rescale_examples():
    D = FormalDet.atom(Det("D", "L0", Fraction(9)))
    assert det_rescale(D, 1, 0, 1) == D
    out = det_rescale(D, 9, 0, 1)
    assert out.prefactor.rational() == Fraction(1, 9)
    assert out.exponent(Det("D", "L0")) == 1


@pytest.mark.parametrize("b0,b1", [(1, 0), (1, 2), (2, 1)])
def test_lambda4_chain(b0, b1):
    tr = Trace()
    N = normalize(parse_det_expr("detp(9*D'|L4_2)", {0: b0, 1: b1}), tr)
    assert N.prefactor == PowerProduct.of(9, b0 - b1)
    assert N.exponent(Det("D", "L1")) == 1
    assert N.exponent(Det("D", "L0")) == -1
    assert "identify-L4_2-with-L1" in tr.rules()


rats = st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9).filter(lambda x: x > 0)


@given(rats, rats, st.integers(0, 3))
def test_rescale_multiplicative(c, c2, b):
    D = FormalDet.atom(Det("D", "L1", Fraction(5)))
    assert det_rescale(det_rescale(D, c, 1, b), c2, 1, b) == det_rescale(D, c * c2, 1, b)


def test_assemble_zsc():
    r = assemble_Zsc(1, 0)
    assert r.ghost_factor.is_one()
    assert r.matches_printed_pattern()
    assert r.prefactor == PowerProduct.of(3, Fraction(-1, 4))
    assert not r.matches_printed_prefactor()
    for rule in ("ghost-determinant", "zero-mode-reduction", "identify-L4_2-with-L1", "rescale"):
        assert rule in r.trace.rules()
    assert assemble_Zsc(1, 1).prefactor.is_one()


def test_det_parser_errors():
    with pytest.raises(ParseError):
        parse_det_expr("detp(9*X|L0)", {0: 1})
    with pytest.raises(ParseError):
        parse_det_expr("detp(D|L0", {0: 1})
