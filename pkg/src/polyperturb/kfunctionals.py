"""Worst-case root displacement constants for invertible operators in the algebra.

For invertible ``T = T(a_0, ..., a_n)``:

* the asymmetric-Hausdorff constant is the root radius of ``T phi_n``;
* the Hausdorff constant is the larger of the root radii of ``T phi_n`` and
  ``T^{-1} phi_n``;
* with ``gamma_j`` the roots of ``a_0 z^n + ... + a_n``, all three of the
  asymmetric Hausdorff, Hausdorff and bottleneck constants are bounded by
  ``n sum|gamma_j|`` (``n^2 sum|gamma_j|`` for the bottleneck one).

The closest-pair and bottleneck constants have no closed form here; see
:mod:`polyperturb.search` for empirical lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import e, factorial, log

import numpy as np

from .dalgebra import DAlgOperator, require_invertible, apply, factor, invert
from .errors import BadIndex, NotInvertible
from .poly import Poly, from_phi, phi
from .roots import find_roots


def _phi_n_radius(T: DAlgOperator) -> float:
    n = T.cap
    if n == 0:
        return 0.0
    roots = find_roots(apply(T, phi(n, n))).points
    return float(np.max(np.abs(roots)))


def k_h_exact(T: DAlgOperator) -> float:
    require_invertible(T)
    return _phi_n_radius(T)


def k_H_exact(T: DAlgOperator) -> float:
    require_invertible(T)
    return max(_phi_n_radius(T), _phi_n_radius(invert(T)))


@dataclass(frozen=True)
class FactorBounds:
    sum_gamma: float
    K_h_ub: float
    K_H_ub: float
    K_F_ub: float
    gammas: tuple = ()

    def as_dict(self) -> dict:
        return {"sum_gamma": self.sum_gamma, "K_h_ub": self.K_h_ub,
                "K_H_ub": self.K_H_ub, "K_F_ub": self.K_F_ub}


def k_bounds_t13(T: DAlgOperator) -> FactorBounds:
    """Upper bounds from the factorisation ``T = a_0 prod (I - gamma_j D)``."""
    _, gammas = factor(T)
    n = T.cap
    s = float(np.sum(np.abs(gammas)))
    return FactorBounds(sum_gamma=s, K_h_ub=n * s, K_H_ub=n * s, K_F_ub=n * n * s,
                        gammas=tuple(complex(g) for g in gammas))


def k_hk_exact(n: int, k: int, gamma: complex) -> float:
    """Closed form ``(|gamma| n!/(n-k)!)^(1/k)`` for ``H_k(gamma) = I - gamma D^k``."""
    if not 1 <= k <= n:
        raise BadIndex(f"need 1 <= k <= n, got k={k}, n={n}")
    return (abs(gamma) * factorial(n) / factorial(n - k)) ** (1.0 / k)


def k_shift_exact(alpha: complex) -> float:
    """Every displacement constant of the shift ``f -> f(. + alpha)`` equals ``|alpha|``."""
    return abs(alpha)


@dataclass(frozen=True)
class InverseH1Bracket:
    lower: float
    upper: float
    witness: Poly


def k_h_inverse_h1_bracket(n: int, gamma: complex) -> InverseH1Bracket:
    """Bracket for the asymmetric-Hausdorff constant of ``(I - gamma D)^{-1}``.

    ``witness = gamma^{n-1} phi_1 + ... + gamma phi_{n-1} + phi_n`` satisfies
    ``witness - gamma witness' = phi_n - gamma^n``: it has a root at 0 while
    the image has all roots on the circle of radius ``(n!)^(1/n) |gamma|``.
    """
    if n < 1:
        raise BadIndex("need n >= 1")
    gamma = complex(gamma)
    coords = np.zeros(n + 1, dtype=complex)
    for k in range(1, n + 1):
        coords[k] = gamma ** (n - k)
    return InverseH1Bracket(lower=factorial(n) ** (1.0 / n) * abs(gamma),
                            upper=n * abs(gamma),
                            witness=from_phi(n, coords))


def k_F_vs_k_H_factor(n: int) -> float:
    """``e n^3 ln n``: the bottleneck constant is at most this times the Hausdorff one."""
    if n < 2:
        raise BadIndex("the factor degenerates for n < 2")
    return e * n ** 3 * log(n)


@dataclass(frozen=True)
class QuadraticImage:
    z1: complex
    z2: complex
    displacement_bound: float
    delta1: complex
    delta2: complex


def quadratic_image_roots(a0: complex, a1: complex, a2: complex,
                          w1: complex, w2: complex) -> QuadraticImage:
    """Closed-form roots of ``T(a0, a1, a2)`` applied to ``(z - w1)(z - w2)``.

    ``z = (w1 + w2)/2 - d1 +- sqrt(((w1 - w2)/2)^2 + d2)`` with ``d1 = a1/a0``
    and ``d2 = d1^2 - 2 a2/a0`` (the factor 2 comes from ``D^2 z^2 = 2``).
    Both roots are within ``|d1| + sqrt|d2|`` of ``{w1, w2}`` and vice versa.
    """
    a0 = complex(a0)
    if a0 == 0:
        raise NotInvertible("a0 must be non-zero")
    d1 = complex(a1) / a0
    d2 = d1 * d1 - 2 * complex(a2) / a0
    mid = (complex(w1) + complex(w2)) / 2
    half = (complex(w1) - complex(w2)) / 2
    s = np.sqrt(complex(half * half + d2))
    return QuadraticImage(z1=complex(mid - d1 + s), z2=complex(mid - d1 - s),
                          displacement_bound=abs(d1) + abs(d2) ** 0.5,
                          delta1=d1, delta2=d2)
