"""Star products, apolarity, circular domains and Grace-type containment checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .dalgebra import DAlgOperator, apply, is_invertible
from .errors import CapMismatch, DegreeMismatch, PreconditionError, PreconditionFailed
from .poly import Poly, degree, derivative, from_phi, from_roots, phi, phi_coords, reflect
from .roots import RootMultiset, find_roots


# --- products -------------------------------------------------------------

def _common_degree(f: Poly, g: Poly) -> int:
    if f.cap != g.cap:
        raise CapMismatch(f"cap {f.cap} != cap {g.cap}")
    m, mg = degree(f), degree(g)
    if m != mg or m < 1:
        raise DegreeMismatch(f"*-product needs equal positive degrees, got {m} and {mg}")
    return m


def _star_coeffs(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    # r_k = sum_{j=0}^{m-k} a_{k+j} b_{m-j}
    out = np.zeros(a.size, dtype=complex)
    for k in range(m + 1):
        j = np.arange(m - k + 1)
        out[k] = np.sum(a[k + j] * b[m - j])
    return out


def star_m(f: Poly, g: Poly) -> Poly:
    """Degree-``m`` product ``sum_k b_k f^(m-k)`` of two polynomials of degree ``m``."""
    m = _common_degree(f, g)
    return from_phi(f.cap, _star_coeffs(phi_coords(f), phi_coords(g), m))


def star_m_sums(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """The three equivalent expressions for the degree-``m`` product.

    ``(sum_k b_k f^(m-k), sum_k a_k g^(m-k), coefficient formula)``.
    """
    m = _common_degree(f, g)
    a, b = phi_coords(f), phi_coords(g)

    def derivative_sum(p, w):
        acc = np.zeros(p.cap + 1, dtype=complex)
        der = [p]
        for _ in range(m):
            der.append(derivative(der[-1]))
        for k in range(m + 1):
            acc = acc + w[k] * der[m - k].coeffs
        return Poly(p.cap, acc)

    return (derivative_sum(f, b), derivative_sum(g, a),
            from_phi(f.cap, _star_coeffs(a, b, m)))


def star_n(f: Poly, g: Poly) -> Poly:
    """Product transported from operator composition: unit ``phi_n``."""
    if f.cap != g.cap:
        raise CapMismatch(f"cap {f.cap} != cap {g.cap}")
    return from_phi(f.cap, _star_coeffs(phi_coords(f), phi_coords(g), f.cap))


class Apolarity(NamedTuple):
    apolar: bool
    residual: float


def apolarity_value(f: Poly, g: Poly) -> complex:
    """``(f * Rg)(0)`` for equal-degree ``f, g``."""
    m = _common_degree(f, g)
    a = phi_coords(f)
    bR = phi_coords(reflect(g))
    return complex(np.sum(a[:m + 1] * bR[m::-1]))


def is_apolar(f: Poly, g: Poly, tol: float = 1e-9) -> Apolarity:
    """Apolarity test, relative to the largest ``phi``-coordinate of ``f * Rg``."""
    prod = star_m(f, reflect(g))
    coords = phi_coords(prod)
    value = abs(coords[0])
    scale = float(np.max(np.abs(coords)))
    residual = value / scale if scale > 0 else 0.0
    return Apolarity(residual <= tol, residual)


# --- circular domains -----------------------------------------------------

@dataclass(frozen=True)
class ClosedDisk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise PreconditionError("disk radius must be positive")

    def distance(self, z) -> np.ndarray:
        """Distance from ``z`` to the domain (0 inside)."""
        return np.maximum(np.abs(np.asarray(z) - self.center) - self.radius, 0.0)

    convex = True


@dataclass(frozen=True)
class ClosedHalfPlane:
    """``{z : Re(z * conj(normal)) <= offset}``."""

    normal: complex
    offset: float

    def __post_init__(self):
        if abs(abs(self.normal) - 1.0) > 1e-12:
            raise PreconditionError("half-plane normal must have unit modulus")

    def distance(self, z) -> np.ndarray:
        proj = np.real(np.asarray(z) * np.conj(self.normal))
        return np.maximum(proj - self.offset, 0.0)

    convex = True


@dataclass(frozen=True)
class DiskExterior:
    """``{z : |z - center| >= radius}``."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise PreconditionError("disk radius must be positive")

    def distance(self, z) -> np.ndarray:
        return np.maximum(self.radius - np.abs(np.asarray(z) - self.center), 0.0)

    convex = False


CircularDomain = Union[ClosedDisk, ClosedHalfPlane, DiskExterior]


def domain_contains(omega: CircularDomain, z: complex, tol: float = 0.0) -> bool:
    return bool(omega.distance(z) <= tol)


def default_tol(*polys: Poly) -> float:
    """``1e-7 * (1 + root radius scale)`` of the polynomials involved."""
    scale = 0.0
    for p in polys:
        if degree(p) >= 1:
            scale = max(scale, float(np.max(np.abs(find_roots(p).points))))
    return 1e-7 * (1.0 + scale)


# --- theorem checks -------------------------------------------------------

@dataclass
class ContainmentReport:
    """Outcome of a containment check.

    ``worst_margin`` is the largest distance by which a point misses the
    required region (0 when contained); ``passed`` means it is within ``tol``.
    """

    passed: bool
    worst_margin: float
    tol: float
    worst_point: complex | None = None
    witness: complex | None = None
    details: dict = field(default_factory=dict)


def _roots_in_domain(roots: RootMultiset, omega: CircularDomain, tol: float):
    if roots.kind != "finite":
        return True, 0.0
    d = omega.distance(roots.points)
    return bool(np.all(d <= tol)), float(np.max(d))


def check_grace(f: Poly, g: Poly, omega: CircularDomain, tol: float | None = None,
                apolar_tol: float = 1e-9) -> ContainmentReport:
    """Apolar ``f, g`` with ``Z(g)`` in ``omega``: some root of ``f`` must lie in ``omega``."""
    if tol is None:
        tol = default_tol(f, g)
    ap = is_apolar(f, g, apolar_tol)
    if not ap.apolar:
        raise PreconditionFailed("not_apolar", f"f and g are not apolar (residual {ap.residual:.3e})",
                                 residual=ap.residual)
    inside, excess = _roots_in_domain(find_roots(g), omega, tol)
    if not inside:
        raise PreconditionFailed("g_roots_outside",
                                 f"a root of g lies {excess:.3e} outside the domain",
                                 residual=excess)
    zf = find_roots(f).points
    d = omega.distance(zf)
    i = int(np.argmin(d))
    margin = float(d[i])
    return ContainmentReport(passed=margin <= tol, worst_margin=margin, tol=tol,
                             worst_point=complex(zf[i]),
                             witness=complex(zf[i]) if margin <= tol else None,
                             details={"apolarity_residual": ap.residual})


def _containment(targets: RootMultiset, base: RootMultiset, omega: CircularDomain,
                 tol: float) -> ContainmentReport:
    """Is every ``v`` in ``targets`` of the form ``u + w`` with ``u`` in ``base``, ``w`` in ``omega``?"""
    if targets.kind != "finite":
        return ContainmentReport(True, 0.0, tol)
    if base.kind == "whole_plane":
        return ContainmentReport(True, 0.0, tol)
    if base.kind == "empty":
        return ContainmentReport(False, float("inf"), tol)
    v = targets.points
    diffs = v[:, None] - base.points[None, :]
    miss = omega.distance(diffs).min(axis=1)
    i = int(np.argmax(miss))
    worst = float(miss[i])
    return ContainmentReport(passed=worst <= tol, worst_margin=worst, tol=tol,
                             worst_point=complex(v[i]))


def check_composite_containment(f: Poly, g: Poly, omega: CircularDomain,
                                tol: float | None = None) -> ContainmentReport:
    """With ``Z(g)`` in ``omega``: ``Z(f * g)`` lies in ``Z(f) + omega``."""
    _common_degree(f, g)
    if tol is None:
        tol = default_tol(f, g)
    inside, excess = _roots_in_domain(find_roots(g), omega, tol)
    if not inside:
        raise PreconditionFailed("g_roots_outside",
                                 f"a root of g lies {excess:.3e} outside the domain",
                                 residual=excess)
    return _containment(find_roots(star_m(f, g)), find_roots(f), omega, tol)


def check_operator_grace(T: DAlgOperator, f: Poly, omega: CircularDomain,
                         tol: float | None = None) -> ContainmentReport:
    """Invertible ``T`` with the roots of ``T phi_k`` in ``omega``: ``Z(Tf)`` lies in ``Z(f) + omega``.

    For convex domains only ``T phi_n`` is checked; the roots of the lower
    ``T phi_k`` are derivatives of it and stay inside the convex hull.
    """
    if not is_invertible(T):
        raise PreconditionFailed("not_invertible", "operator is not invertible")
    n = T.cap
    Tf = apply(T, f)
    if tol is None:
        tol = default_tol(f, Tf, apply(T, phi(n, n)))
    ks = [n] if omega.convex else range(1, n + 1)
    for k in ks:
        inside, excess = _roots_in_domain(find_roots(apply(T, phi(k, n))), omega, tol)
        if not inside:
            raise PreconditionFailed("operator_roots_outside",
                                     f"a root of T phi_{k} lies {excess:.3e} outside the domain",
                                     residual=excess)
    return _containment(find_roots(Tf), find_roots(f), omega, tol)


# --- random apolar pairs --------------------------------------------------

def random_apolar_pair(m: int, rng: np.random.Generator, cap: int | None = None,
                       radius: float = 2.0) -> tuple[Poly, Poly]:
    """Random ``f`` of degree ``m`` and a random ``g`` apolar to it.

    ``f`` has i.i.d. roots in a disk; ``m`` of the ``m + 1`` ``phi``-coordinates
    of ``g`` are random and the last one (never the leading one) solves the
    single linear apolarity constraint.
    """
    cap = m if cap is None else cap
    while True:
        roots = radius * np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))
        f = from_roots(roots, 1.0, cap)
        a = phi_coords(f)
        b = np.zeros(cap + 1, dtype=complex)
        b[:m + 1] = (rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1))
        b[:m + 1] *= phi_coords(Poly(m, np.ones(m + 1)))      # k! scaling
        free = int(rng.integers(0, m))
        # constraint: sum_k (-1)^k a_{m-k} b_k = 0
        signs = (-1.0) ** np.arange(m + 1)
        w = signs * a[m::-1]
        pivot = w[free]
        if abs(pivot) < 1e-8:
            continue
        b[free] = 0.0
        b[free] = -np.sum(w * b[:m + 1]) / pivot
        g = from_phi(cap, b)
        if degree(g) == m:
            return f, g
