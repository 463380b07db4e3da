from fractions import Fraction
from itertools import combinations
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symquad.errors import ValidationError
from symquad.matrix import QMatrix
from symquad.schubert import (
    SchubertElt,
    StrictPartition,
    chern_tangent,
    graded_dimensions_linear_algebra,
    integrate,
    lg_degree,
    lg_dimension,
    moduli_dimension,
    parse_product,
    poincare_pairing,
    ring_tables,
    strict_partitions,
)


def shifted_tableaux(parts) -> Fraction:
    """Number of standard shifted tableaux, by the shifted hook-type product."""
    n = sum(parts)
    val = Fraction(factorial(n), prod(factorial(p) for p in parts))
    for a, b in combinations(parts, 2):
        val *= Fraction(a - b, a + b)
    return val


def partition_counts(r):
    return [len(strict_partitions(r, w)) for w in range(lg_dimension(r) + 1)]


@pytest.mark.parametrize("r", range(1, 7))
def test_graded_dimensions(r):
    dims = ring_tables(r).graded_dimensions()
    assert dims == partition_counts(r)
    assert sum(dims) == 2**r


@pytest.mark.parametrize("r", range(1, 7))
def test_graded_dimensions_by_linear_algebra(r):
    dims = graded_dimensions_linear_algebra(r)
    assert dims[: lg_dimension(r) + 1] == partition_counts(r)
    assert all(d == 0 for d in dims[lg_dimension(r) + 1 :])


@pytest.mark.parametrize("r", range(1, 6))
def test_degree_against_shifted_tableaux(r):
    n = lg_dimension(r)
    assert lg_degree(r) == 2 ** (n - r) * shifted_tableaux(tuple(range(r, 0, -1)))


def test_degree_values():
    assert lg_degree(2) == 2
    assert lg_degree(3) == 16


@pytest.mark.parametrize("r", range(1, 6))
def test_pairing_is_perfect_and_dual(r):
    M = poincare_pairing(r)
    assert abs(QMatrix(M).det()) == 1
    basis = strict_partitions(r)
    for i, lam in enumerate(basis):
        comp = tuple(x for x in range(r, 0, -1) if x not in lam.parts)
        for j, mu in enumerate(basis):
            assert M[i][j] == (1 if mu.parts == comp else 0)


@pytest.mark.parametrize("r", range(2, 6))
def test_sigma1_squared(r):
    s1 = SchubertElt.sigma(r, 1)
    assert s1 * s1 == 2 * SchubertElt.sigma(r, 2)


def elements(r):
    parts = strict_partitions(r)
    return st.dictionaries(st.sampled_from(parts), st.integers(-3, 3), max_size=3).map(lambda d: SchubertElt(r, d))


@given(st.data())
def test_ring_axioms(data):
    r = data.draw(st.integers(2, 4))
    a, b, c = (data.draw(elements(r)) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * SchubertElt.one(r) == a


@pytest.mark.parametrize("r", range(2, 7))
def test_chern_classes(r):
    d = chern_tangent(r)
    assert d.c1 == (r + 1) * SchubertElt.sigma(r, 1)
    assert d.c2 == (r * r + 2 * r) * SchubertElt.sigma(r, 2)
    assert d.linear_coeff == r + 1
    assert d.square_coeff == Fraction(r * r + r - 2, 2)
    assert d.e2_coeff == r + 2


def test_moduli_dimension():
    assert moduli_dimension(2).value == 6
    for r in range(2, 13):
        assert moduli_dimension(r).consistent


def test_parse_and_integrate():
    assert integrate(parse_product(2, "s1*s1*s1")) == 2
    assert integrate(parse_product(3, "s21*s3")) == 1
    assert parse_product(3, "s21*s3*s1") == SchubertElt(3)
    with pytest.raises(ValidationError):
        integrate(parse_product(3, "s1"))
    with pytest.raises(ValidationError):
        parse_product(3, "s1**s2")


def test_strict_partition_validation():
    assert str(StrictPartition((2, 1))) == "s21"
    with pytest.raises(ValidationError):
        StrictPartition((2, 2))
    with pytest.raises(ValidationError):
        SchubertElt.sigma(2, 3)
