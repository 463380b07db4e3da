from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symquad.errors import ValidationError
from symquad.matrix import ProjSymPoint, QMatrix
from symquad.normal_form import normal_form, rational_sqrt, verify_result
from symquad.symplectic import is_symplectic, omega, orbit_point, orbit_samples, random_symplectic, standard_point


def independent_check(res, Z) -> float:
    """Residual of W T W^t - scale Z and W^t Omega W - Omega, recomputed with mpmath."""
    with mpmath.workdps(40):
        W = mpmath.matrix([[mpmath.mpc(x) for x in row] for row in (res.witness.to_strings() if res.exact else res.witness)])
        if res.exact:
            W = mpmath.matrix([[mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in row] for row in res.witness.to_strings()])
        n = Z.nrows
        T = mpmath.matrix([[float(res.target_matrix[i, j]) for j in range(n)] for i in range(n)])
        Om = mpmath.matrix([[float(omega(res.r)[i, j]) for j in range(n)] for i in range(n)])
        Zm = mpmath.matrix([[mpmath.mpf(Z[i, j].numerator) / Z[i, j].denominator for j in range(n)] for i in range(n)])
        scale = mpmath.mpc(str(res.scale)) if res.exact else res.scale
        a = W * T * W.T - Zm * scale
        b = W.T * Om * W - Om
        return float(max(max(abs(x) for x in a), max(abs(x) for x in b)))


def test_diag_example_exact():
    Z = QMatrix.diag([4, 1, Fraction(1, 4), 1])
    res = normal_form(2, Z)
    assert res.exact
    assert res.witness == QMatrix.diag([2, 1, Fraction(1, 2), 1])
    assert res.scale == 1
    assert res.target_matrix == QMatrix.identity(4)


def test_fixed_points():
    for k in (1, 2):
        res = normal_form(2, standard_point(2, k))
        assert res.exact and res.witness == QMatrix.identity(4)
        assert res.target_matrix == standard_point(2, k)


def test_rank_two_block_example():
    Z = QMatrix.diag([1, 0, 0, 1])
    res = normal_form(2, Z)
    assert res.exact
    assert is_symplectic(res.witness)
    assert res.witness @ res.target_matrix @ res.witness.T == Z * res.scale
    assert res.target_matrix == standard_point(2, 2)


def test_general_method_on_diagonal_input():
    Z = QMatrix.diag([1, 0, 0, 1])
    res = normal_form(2, Z, method="general")
    assert verify_result(res, Z) == 0


def test_outside_rejected():
    with pytest.raises(ValidationError):
        normal_form(2, QMatrix.diag([1, 1, 1, 0]))
    with pytest.raises(ValidationError):
        normal_form(2, QMatrix.identity(4), method="bogus")


def test_projective_input_scale():
    Z = QMatrix.diag([4, 1, Fraction(1, 4), 1]) * 6
    p = ProjSymPoint(Z)
    res = normal_form(2, p)
    assert verify_result(res, p) == 0


def test_irrational_scale_is_approximate():
    # pairs multiply to 2, which is not a rational square
    Z = orbit_point(random_symplectic(2, 3), QMatrix.diag([2, 3, 1, Fraction(2, 3)]))
    res = normal_form(2, Z)
    assert not res.exact
    assert verify_result(res, Z) <= 1e-9
    assert independent_check(res, Z) <= 1e-9


@given(st.integers(1, 3), st.integers(0, 10**5))
def test_normal_form_on_samples(r, seed):
    for Z in orbit_samples(r, 4, seed):
        res = normal_form(r, Z)
        assert verify_result(res, Z) <= 1e-9
        assert independent_check(res, Z) <= 1e-9
        assert res.target_matrix.rank() == Z.rank()


@given(st.fractions(min_value=0, max_value=50, max_denominator=50))
def test_rational_sqrt(q):
    s = rational_sqrt(q * q)
    assert s == q
    root = rational_sqrt(q)
    if root is not None:
        assert root * root == q
