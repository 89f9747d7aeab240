import numpy as np
import pytest

from polyperturb.dalgebra import DAlgOperator, shift_operator
from polyperturb.errors import DegreeMismatch, PreconditionError, PreconditionFailed
from polyperturb.poly import from_roots, monomial, phi
from polyperturb.roots import find_roots
from polyperturb.star import (ClosedDisk, ClosedHalfPlane, DiskExterior, apolarity_value,
                              check_composite_containment, check_grace, check_operator_grace,
                              is_apolar, random_apolar_pair, star_m, star_m_sums, star_n)


def test_three_forms_agree(rng):
    for m in range(1, 7):
        f = from_roots(rng.standard_normal(m) + 1j * rng.standard_normal(m), 1.0, m)
        g = from_roots(rng.standard_normal(m), 2.0, m)
        a, b, c = star_m_sums(f, g)
        np.testing.assert_allclose(a.coeffs, c.coeffs, atol=1e-10)
        np.testing.assert_allclose(b.coeffs, c.coeffs, atol=1e-10)


def test_star_m_of_monomials():
    # z^2 * z^2: sum_k b_k f^(2-k) with only b_2 = 2 -> 2 z^2
    f = monomial(2, [0, 0, 1])
    np.testing.assert_allclose(star_m(f, f).coeffs, [0, 0, 2])


def test_star_n_unit(rng):
    f = monomial(3, rng.standard_normal(4))
    np.testing.assert_allclose(star_n(f, phi(3, 3)).coeffs, f.coeffs, atol=1e-12)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        star_m(monomial(3, [1, 1]), monomial(3, [1, 1, 1]))


def test_apolarity_examples():
    # z^2 is apolar to itself; z^2 + 1 is not
    z2 = monomial(2, [0, 0, 1])
    assert is_apolar(z2, z2).apolar
    q = monomial(2, [1, 0, 1])
    assert apolarity_value(q, q) == pytest.approx(4)
    assert not is_apolar(q, q).apolar


def test_random_pairs_are_apolar(rng):
    for m in range(2, 9):
        f, g = random_apolar_pair(m, rng)
        assert is_apolar(f, g).apolar


def test_domains():
    assert ClosedDisk(0, 1).distance(2) == pytest.approx(1)
    assert ClosedHalfPlane(1, 0).distance(-5) == 0
    assert DiskExterior(0, 1).distance(0.25) == pytest.approx(0.75)
    with pytest.raises(PreconditionError):
        ClosedDisk(0, 0)
    with pytest.raises(PreconditionError):
        ClosedHalfPlane(2, 0)


def test_grace_rejects_non_apolar():
    q = monomial(2, [1, 0, 1])
    with pytest.raises(PreconditionFailed) as exc:
        check_grace(q, q, ClosedDisk(0, 5))
    assert exc.value.reason == "not_apolar"


def test_grace_rejects_roots_outside(rng):
    f, g = random_apolar_pair(3, rng)
    with pytest.raises(PreconditionFailed) as exc:
        check_grace(f, g, ClosedDisk(100, 1))
    assert exc.value.reason == "g_roots_outside"


def test_grace_on_half_plane_and_exterior(rng):
    for _ in range(30):
        f, g = random_apolar_pair(4, rng)
        zg = find_roots(g).points
        normal = np.exp(1j * rng.uniform(0, 2 * np.pi))
        offset = float(np.max(np.real(zg * np.conj(normal))))
        assert check_grace(f, g, ClosedHalfPlane(normal, offset)).passed
        # exterior of a disk that avoids every root of g
        center = complex(rng.standard_normal() * 3)
        radius = float(np.min(np.abs(zg - center)))
        assert check_grace(f, g, DiskExterior(center, radius)).passed


def test_composite_containment(rng):
    for _ in range(30):
        f = from_roots(rng.standard_normal(3) + 1j * rng.standard_normal(3), 1.0, 3)
        g = from_roots([0.1, -0.2j, 0.05], 1.0, 3)
        assert check_composite_containment(f, g, ClosedDisk(0, 0.25)).passed


def test_operator_grace():
    T = shift_operator(1 + 1j, 3)
    f = from_roots([0, 1, 2], 1.0, 3)
    rep = check_operator_grace(T, f, ClosedDisk(-1 - 1j, 1e-9))
    assert rep.passed
    with pytest.raises(PreconditionFailed) as exc:
        check_operator_grace(DAlgOperator(3, [0, 1, 0, 0]), f, ClosedDisk(0, 1))
    assert exc.value.reason == "not_invertible"
    with pytest.raises(PreconditionFailed) as exc:
        check_operator_grace(T, f, ClosedDisk(5, 1))
    assert exc.value.reason == "operator_roots_outside"


def test_operator_grace_second_order():
    # T phi_2 = z^2/2 - 1 has roots +-sqrt(2)
    T = DAlgOperator(2, [1, 0, -1])
    f = from_roots([0, 0], 1.0, 2)
    assert check_operator_grace(T, f, ClosedDisk(0, 1.5)).passed
    with pytest.raises(PreconditionFailed):
        check_operator_grace(T, f, ClosedDisk(0, 1.0))
