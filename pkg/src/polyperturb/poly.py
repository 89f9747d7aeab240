"""Complex polynomials of bounded degree.

A :class:`Poly` lives in the space of polynomials of degree at most ``cap``.
Coefficients are stored in the monomial basis ``z**k``; the scaled basis
``phi_k(z) = z**k / k!`` is available as a view through :func:`phi_coords`
and :func:`from_phi`.  In that basis the ``k``-th coordinate of ``f`` is
``f^(k)(0)``, which is the form the operator algebra works in.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import CapMismatch, CapacityExceeded, PreconditionError

ZERO_DEGREE = -1
"""Degree reported for the zero polynomial (stands in for minus infinity)."""

EXACT_ZERO = 1e-300
RELATIVE_ZERO = 1e-12


def factorials(n: int) -> np.ndarray:
    return np.array([float(factorial(k)) for k in range(n + 1)])


@dataclass(frozen=True, eq=False)
class Poly:
    """Polynomial ``sum(coeffs[k] * z**k)`` in the space of degree <= ``cap``."""

    cap: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if self.cap < 0:
            raise PreconditionError("cap must be non-negative")
        if c.size != self.cap + 1:
            raise PreconditionError(
                f"expected {self.cap + 1} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def degree(self, mode: str = "exact") -> int:
        return degree(self, mode)

    @property
    def leading(self) -> complex:
        d = self.degree()
        return 0j if d == ZERO_DEGREE else complex(self.coeffs[d])

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"Poly(cap={self.cap}, coeffs=[{terms}])"

    def allclose(self, other: "Poly", atol=1e-12, rtol=0.0) -> bool:
        return self.cap == other.cap and np.allclose(
            self.coeffs, other.coeffs, atol=atol, rtol=rtol)

    def __add__(self, other: "Poly") -> "Poly":
        _check_cap(self, other)
        return Poly(self.cap, self.coeffs + other.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        _check_cap(self, other)
        return Poly(self.cap, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "Poly":
        return Poly(self.cap, self.coeffs * complex(scalar))

    __rmul__ = __mul__


def _check_cap(p: Poly, q: Poly) -> None:
    if p.cap != q.cap:
        raise CapMismatch(f"cap {p.cap} != cap {q.cap}")


def degree(p: Poly, mode: str = "exact") -> int:
    """Largest ``k`` with a non-negligible coefficient.

    ``mode="exact"`` treats ``|c_k| <= 1e-300`` as zero; ``mode="relative"``
    treats ``|c_k| <= 1e-12 * max|c|`` as zero, which is the right test for
    coefficients produced by floating-point computation.
    """
    mags = np.abs(p.coeffs)
    if mode == "exact":
        thresh = EXACT_ZERO
    elif mode == "relative":
        thresh = max(RELATIVE_ZERO * mags.max(initial=0.0), EXACT_ZERO)
    else:
        raise ValueError(f"unknown degree mode {mode!r}")
    nz = np.nonzero(mags > thresh)[0]
    return int(nz[-1]) if nz.size else ZERO_DEGREE


def zero(cap: int) -> Poly:
    return Poly(cap, np.zeros(cap + 1, dtype=complex))


def monomial(cap: int, coeffs: Sequence[complex]) -> Poly:
    """Pad ``coeffs`` (ascending) with zeros up to length ``cap + 1``."""
    coeffs = list(coeffs)
    if len(coeffs) > cap + 1:
        raise CapacityExceeded(f"{len(coeffs) - 1} > cap {cap}")
    c = np.zeros(cap + 1, dtype=complex)
    c[:len(coeffs)] = coeffs
    return Poly(cap, c)


def phi(k: int, cap: int) -> Poly:
    """The basis polynomial ``z**k / k!``."""
    if not 0 <= k <= cap:
        raise CapacityExceeded(f"phi_{k} not in P_{cap}")
    c = np.zeros(cap + 1, dtype=complex)
    c[k] = 1.0 / factorial(k)
    return Poly(cap, c)


def phi_coords(p: Poly) -> np.ndarray:
    """Coordinates ``a_k = k! c_k = p^(k)(0)`` in the ``phi`` basis."""
    return p.coeffs * factorials(p.cap)


def from_phi(cap: int, a: Iterable[complex]) -> Poly:
    a = np.asarray(list(a) if not isinstance(a, np.ndarray) else a, dtype=complex)
    return Poly(cap, a / factorials(cap))


def evaluate(p: Poly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def derivative(p: Poly) -> Poly:
    c = np.zeros(p.cap + 1, dtype=complex)
    k = np.arange(1, p.cap + 1)
    c[:-1] = p.coeffs[1:] * k
    return Poly(p.cap, c)


def reflect(p: Poly) -> Poly:
    """``z -> p(-z)``."""
    signs = (-1.0) ** np.arange(p.cap + 1)
    return Poly(p.cap, p.coeffs * signs)


def shift_argument(p: Poly, alpha: complex) -> Poly:
    """``z -> p(z + alpha)`` by repeated synthetic division (Taylor shift)."""
    c = np.array(p.coeffs, dtype=complex)
    n = p.cap
    alpha = complex(alpha)
    if alpha == 0:
        return Poly(n, c)
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            c[j] += alpha * c[j + 1]
    return Poly(n, c)


def from_roots(roots: Sequence[complex], leading: complex = 1.0,
               cap: int | None = None) -> Poly:
    """Expand ``leading * prod(z - r)``."""
    roots = np.asarray(list(roots), dtype=complex).reshape(-1)
    if cap is None:
        cap = roots.size
    if roots.size > cap:
        raise CapacityExceeded(f"{roots.size} roots exceed cap {cap}")
    if leading == 0:
        raise PreconditionError("leading coefficient must be non-zero")
    # descending-order product, then reverse to ascending
    desc = np.array([complex(leading)])
    for r in roots:
        desc = np.append(desc, 0) - r * np.append(0, desc)
    c = np.zeros(cap + 1, dtype=complex)
    c[:desc.size] = desc[::-1]
    return Poly(cap, c)


def taylor_coeffs(p: Poly, z0: complex, count: int | None = None):
    """Taylor coefficients ``p^(j)(z0)/j!`` and their rounding-error scales.

    Returns ``(t, bound)`` where ``bound[j]`` is the same sum computed with
    absolute values, i.e. the magnitude against which the rounding error in
    ``t[j]`` is measured.
    """
    n = p.cap
    count = n + 1 if count is None else min(count, n + 1)
    t = np.array(p.coeffs, dtype=complex)
    b = np.abs(p.coeffs).astype(float)
    z0 = complex(z0)
    r = abs(z0)
    for i in range(count):
        for j in range(n - 1, i - 1, -1):
            t[j] += z0 * t[j + 1]
            b[j] += r * b[j + 1]
    return t[:count], b[:count]
