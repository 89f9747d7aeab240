import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import polynomial as P

from polyperturb.dalgebra import (DAlgOperator, MatrixOperator, add_subleading_matrix,
                                  add_value_at_zero_matrix, apply, apply_matrix, compose,
                                  derivative_operator, factor, from_factors, hk_operator,
                                  identity, invert, is_invertible, matrix_of, membership,
                                  reflection_matrix, shift_operator, varpi, varpi_inv)
from polyperturb.errors import NotInAlgebra, NotInvertible
from polyperturb.poly import derivative, from_roots, monomial, phi
from polyperturb.star import star_n

coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def random_op(rng, n, invertible=True):
    a = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    if invertible:
        a[0] = 1 + abs(a[0])
    return DAlgOperator(n, a)


def test_apply_sums_derivatives(rng):
    T = random_op(rng, 4)
    f = monomial(4, rng.standard_normal(5))
    expected = np.zeros(5, dtype=complex)
    d = f
    for k in range(5):
        expected += T.a[k] * d.coeffs
        d = derivative(d)
    np.testing.assert_allclose(apply(T, f).coeffs, expected, atol=1e-12)


def test_matrix_is_upper_toeplitz():
    M = matrix_of(DAlgOperator(2, [1, 2, 3])).entries
    np.testing.assert_array_equal(M, [[1, 2, 3], [0, 1, 2], [0, 0, 1]])


def test_membership_round_trip(rng):
    T = random_op(rng, 5)
    np.testing.assert_allclose(membership(matrix_of(T)).a, T.a)


@pytest.mark.parametrize("build", [reflection_matrix, add_value_at_zero_matrix,
                                   add_subleading_matrix])
def test_membership_rejects(build):
    with pytest.raises(NotInAlgebra):
        membership(build(3))


def test_derivative_is_in_algebra_but_singular():
    T = membership(derivative_operator(3))
    np.testing.assert_allclose(T.a, [0, 1, 0, 0])
    assert not is_invertible(T)
    with pytest.raises(NotInvertible):
        invert(T)


def test_reflection_acts_on_polynomials():
    out = apply_matrix(reflection_matrix(2), monomial(2, [0, 1, 1]))
    np.testing.assert_allclose(out.coeffs, [0, -1, 1])


def test_rank_one_perturbations():
    f = from_roots([1, 2, 3], 1.0, 3)
    g = apply_matrix(add_value_at_zero_matrix(3), f)
    np.testing.assert_allclose(g.coeffs, f.coeffs + f.coeffs[0] * phi(3, 3).coeffs)
    h = apply_matrix(add_subleading_matrix(3), f)
    np.testing.assert_allclose(h.coeffs, f.coeffs + np.r_[f.coeffs[2] / 3, 0, 0, 0])


@given(st.lists(coef, min_size=2, max_size=7), st.lists(coef, min_size=2, max_size=7))
def test_composition_commutes(a, b):
    n = min(len(a), len(b)) - 1
    S, T = DAlgOperator(n, a[:n + 1]), DAlgOperator(n, b[:n + 1])
    np.testing.assert_allclose(compose(S, T).a, compose(T, S).a, atol=1e-12)
    np.testing.assert_allclose(matrix_of(S @ T).entries,
                               matrix_of(S).entries @ matrix_of(T).entries, atol=1e-12)


def test_inverse(rng):
    for n in range(1, 9):
        T = random_op(rng, n)
        np.testing.assert_allclose(compose(T, invert(T)).a, identity(n).a, atol=1e-10)


def test_factor_round_trip(rng):
    for n in range(1, 8):
        T = random_op(rng, n)
        a0, gammas = factor(T)
        np.testing.assert_allclose(from_factors(a0, gammas, n).a, T.a, atol=1e-9)


def test_factor_pads_zero_gammas():
    a0, gammas = factor(DAlgOperator(3, [2, 1, 0, 0]))
    np.testing.assert_allclose(sorted(gammas, key=abs), [0, 0, -0.5], atol=1e-15)


def test_varpi_is_an_algebra_isomorphism(rng):
    S, T = random_op(rng, 4), random_op(rng, 4)
    np.testing.assert_allclose(varpi(S @ T).coeffs, star_n(varpi(S), varpi(T)).coeffs, atol=1e-10)
    np.testing.assert_allclose(varpi_inv(varpi(S)).a, S.a)


def test_shift_operator_shifts(rng):
    alpha = 0.7 - 1.1j
    c = rng.standard_normal(5)
    out = apply(shift_operator(alpha, 4), monomial(4, c))
    z = np.array([0.2, 1 + 1j])
    np.testing.assert_allclose(out(z), P.polyval(z + alpha, c), rtol=1e-12)


def test_hk_operator():
    H = hk_operator(2, 0.5, 3)
    out = apply(H, monomial(3, [0, 0, 0, 1]))
    np.testing.assert_allclose(out.coeffs, [0, -3, 0, 1])


def test_matrix_operator_shape_check():
    with pytest.raises(ValueError):
        MatrixOperator(2, np.eye(2))
