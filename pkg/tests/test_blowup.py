import logging
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from symquad.blowup import (
    AmbientData,
    SegreData,
    _sym2_reduce,
    blowup_power,
    chasles,
    grassmannian_tangent_chern,
    nine_lines,
    schubert_restrictions,
    segre_from_chern,
    series_div,
    series_mul,
    series_pow,
    symplectic_tangency_number,
    veronese_segre,
)
from symquad.errors import InvariantViolation, ValidationError
from symquad.poly import MPoly
from symquad.secant import secant_deg

h = sympy.Symbol("h")


def sympy_series(expr, n):
    s = sympy.series(expr, h, 0, n + 1).removeO()
    return [Fraction(str(s.coeff(h, k))) for k in range(n + 1)]


def test_veronese_segre_values():
    assert list(veronese_segre(2).segre) == [1, -9, 51]
    assert list(veronese_segre(3).segre) == [1, -16, 146, -996]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_veronese_segre_against_sympy(n):
    N = comb(n + 2, 2) - 1
    assert list(veronese_segre(n).segre) == sympy_series((1 + h) ** (n + 1) / (1 + 2 * h) ** (N + 1), n)


def test_identity_series():
    assert list(segre_from_chern([1, 3, 5], [1, 3, 5], 2).segre) == [1, 0, 0]


coef = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=0, max_size=4)


@given(coef, coef)
def test_division_then_multiplication(a, b):
    num, den = [Fraction(1)] + a, [Fraction(1)] + b
    q = series_div(num, den, 5)
    assert series_mul(q, den, 5) == (num + [Fraction(0)] * 5)[:5]


def test_zero_constant_term():
    with pytest.raises(ValidationError):
        segre_from_chern([0, 1], [1, 1], 1)
    with pytest.raises(ValidationError):
        segre_from_chern([1, 1], [2, 1], 1)


def expansion_oracle(a, b, n, hTop, m, codim, s):
    """Expand (aH - bE)^n with sympy and replace each monomial by its intersection number."""
    H, E = sympy.symbols("H E")
    poly = sympy.Poly(sympy.expand((a * H - b * E) ** n), H, E)
    total = 0
    for (i, j), c in poly.terms():
        if j == 0:
            total += c * hTop
        elif j >= codim:
            total += c * (-1) ** (j - 1) * m ** (n - j) * s[j - codim]
    return total


@given(st.integers(-4, 6), st.integers(-3, 3), st.data())
def test_blowup_power_matches_expansion(a, b, data):
    centerDim = data.draw(st.integers(0, 3))
    codim = data.draw(st.integers(1, 3))
    n = centerDim + codim
    s = [1] + data.draw(st.lists(st.integers(-20, 20), min_size=centerDim, max_size=centerDim))
    m = data.draw(st.integers(1, 3))
    hTop = data.draw(st.integers(1, 5))
    seg = SegreData(centerDim, codim, m, tuple(s))
    assert blowup_power(a, b, n, AmbientData(n, hTop), seg) == expansion_oracle(a, b, n, hTop, m, codim, s)


@given(st.integers(-5, 5))
def test_b_zero(a):
    seg = veronese_segre(3)
    assert blowup_power(a, 0, 9, AmbientData(9), seg) == a**9


def test_dimension_checks():
    with pytest.raises(ValidationError):
        blowup_power(2, 1, 8, AmbientData(9), veronese_segre(3))
    with pytest.raises(ValidationError):
        blowup_power(2, 1, 9, AmbientData(9), SegreData(3, 5, 2, (1, 0, 0, 0)))
    with pytest.raises(ValidationError):
        SegreData(2, 3, 2, (2, 0, 0))
    with pytest.raises(ValidationError):
        AmbientData(4, 0)


def test_classical_anchors():
    assert nine_lines() == 92
    assert chasles() == 3264


def test_center_degree_matches_secant_degree():
    # the Veronese 3-fold has degree m^3 = 8 = secant_deg(3, 1)
    seg = veronese_segre(3)
    assert seg.m**seg.centerDim == secant_deg(3, 1) == 8


@pytest.mark.parametrize("seed", [0, 7])
def test_restrictions(seed):
    res = schubert_restrictions(seed)
    assert res.sigma1 == 2
    assert res.sigma11 == 2
    assert res.sigma2 + res.sigma11 == 4
    assert res.line_image_degree == 2
    assert res.consistent


def test_tangent_chern_against_tangent_sequence():
    # c(T_G) c(End S) = c(S^v)^5 on the Grassmannian of lines in P^4
    for a in (0, 1, 2, 3):
        split = grassmannian_tangent_chern(a)
        cS = 1 + 2 * h + a * h**2
        endS = 1 - (4 - 4 * a) * h**2
        assert split == sympy_series(cS**5 / endS, 3)


def test_symmetric_reduction():
    x1, x2, t = MPoly.var("x1"), MPoly.var("x2"), MPoly.var("t")
    f = x1 * x1 + x2 * x2 + x1 * x2 * t
    got = _sym2_reduce(f, MPoly.var("e1"), MPoly.var("e2"))
    e1, e2 = MPoly.var("e1"), MPoly.var("e2")
    assert got == e1 * e1 - e2 * 2 + e2 * t
    with pytest.raises(InvariantViolation):
        _sym2_reduce(x1, e1, e2)


def test_symplectic_tangency_number(caplog):
    with caplog.at_level(logging.INFO, logger="symquad.blowup"):
        assert symplectic_tangency_number() == 40
    assert any("Schubert restrictions" in rec.getMessage() for rec in caplog.records)


def test_grassmannian_degree_sanity():
    cTG = grassmannian_tangent_chern(2)
    seg = segre_from_chern(series_pow([1, 1], 4, 4), cTG, 3, codim=3, m=2)
    assert blowup_power(1, 0, 6, AmbientData(6, 5), seg) == 5
