import numpy as np
import pytest
from math import e, log, sqrt

from polyperturb.dalgebra import DAlgOperator, apply, hk_operator, invert, shift_operator
from polyperturb.distances import dist_h
from polyperturb.errors import BadIndex, NotInvertible
from polyperturb.kfunctionals import (k_bounds_t13, k_F_vs_k_H_factor, k_H_exact, k_h_exact,
                                      k_h_inverse_h1_bracket, k_hk_exact, k_shift_exact,
                                      quadratic_image_roots)
from polyperturb.poly import from_phi, from_roots
from polyperturb.roots import find_roots

CUBIC = DAlgOperator(3, [1, 2 / 3, 2 / 9, -4 / 27])


def test_cubic_example_constants():
    target = (2 / 3) * (1 + 2 ** (1 / 3))
    assert target == pytest.approx(1.506614, abs=1e-6)
    assert k_h_exact(CUBIC) == pytest.approx(target, abs=1e-9)
    assert k_H_exact(CUBIC) == pytest.approx(target, abs=1e-9)


def test_shift_constants():
    S = shift_operator(1 + 2j, 4)
    assert k_h_exact(S) == pytest.approx(sqrt(5), abs=1e-9)
    assert k_H_exact(S) == pytest.approx(sqrt(5), abs=1e-9)
    assert k_shift_exact(1 + 2j) == pytest.approx(sqrt(5))


def test_hk_closed_form():
    assert k_hk_exact(5, 2, 0.3) == pytest.approx(sqrt(6), abs=1e-12)
    assert k_h_exact(hk_operator(2, 0.3, 5)) == pytest.approx(sqrt(6), abs=1e-9)
    with pytest.raises(BadIndex):
        k_hk_exact(3, 4, 1)


def test_kH_of_h1_is_n_gamma():
    for n in (2, 4, 6):
        assert k_H_exact(hk_operator(1, 0.5, n)) == pytest.approx(0.5 * n, abs=1e-9)


def test_inverse_h1_bracket():
    b = k_h_inverse_h1_bracket(4, 1.0)
    assert b.lower == pytest.approx(24 ** 0.25) and b.upper == 4
    image = apply(hk_operator(1, 1.0, 4), b.witness)
    np.testing.assert_allclose(image.coeffs, from_phi(4, [-1, 0, 0, 0, 1]).coeffs, atol=1e-12)
    assert b.lower <= k_h_exact(invert(hk_operator(1, 1.0, 4))) <= b.upper


def test_factor_bounds_for_h1():
    b = k_bounds_t13(hk_operator(1, 2.0, 3))
    assert b.sum_gamma == pytest.approx(2.0)
    assert (b.K_h_ub, b.K_H_ub, b.K_F_ub) == pytest.approx((6, 6, 18))


def test_kh_requires_invertible():
    with pytest.raises(NotInvertible):
        k_h_exact(DAlgOperator(2, [0, 1, 0]))


def test_bottleneck_to_hausdorff_factor():
    assert k_F_vs_k_H_factor(3) == pytest.approx(e * 27 * log(3))
    with pytest.raises(BadIndex):
        k_F_vs_k_H_factor(1)


def test_quadratic_against_solver(rng):
    for _ in range(50):
        a0, a1, a2, w1, w2 = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        q = quadratic_image_roots(a0, a1, a2, w1, w2)
        got = find_roots(apply(DAlgOperator(2, [a0, a1, a2]), from_roots([w1, w2], 1.0, 2)))
        assert dist_h(got, [q.z1, q.z2]) < 1e-9 * (1 + abs(q.z1) + abs(q.z2))
        assert dist_h([w1, w2], [q.z1, q.z2]) <= q.displacement_bound + 1e-9


def test_quadratic_pure_shift():
    q = quadratic_image_roots(1, 0.5, 0.125, 1, -1)
    # a2 = a1^2/2 makes T a pure shift by -a1
    assert sorted([q.z1, q.z2], key=lambda z: z.real) == pytest.approx([-1.5, 0.5])
