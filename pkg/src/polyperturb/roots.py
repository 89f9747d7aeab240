"""Root multisets, the root radius, and convex-hull membership.

Roots are computed by simultaneous Aberth-Ehrlich iteration.  A multiple
root of multiplicity ``k`` only converges to about ``eps**(1/k)``, so after
the iteration approximations that form a cluster are tested for being one
multiple root (the shifted Taylor coefficients of orders ``0..k-1`` vanish to
rounding level) and, if so, replaced by ``k`` copies of the root of
``p^(k-1)`` near the cluster mean.  Clusters of genuinely distinct roots
fail the test and are left alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import MultiPoint, Point

from .errors import NoConvergence, NotNonconstant, PreconditionError
from .poly import ZERO_DEGREE, Poly, degree, taylor_coeffs

EPS = np.finfo(float).eps

DEFAULT_TOL = 1e-13
MAX_ITER = 500
ANGLE_OFFSET = 0.37
START_SCALE = 0.8

# single-linkage radii (relative to 1+|z|) tried when grouping clusters
_CLUSTER_RADII = (1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 3e-2, 1e-1)
_MULTIPLICITY_SLACK = 1000.0


@dataclass(frozen=True, eq=False)
class RootMultiset:
    """``Z(f)``: finite multiset, empty (non-zero constant) or whole plane (f = 0)."""

    kind: str
    points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        if self.kind not in ("finite", "empty", "whole_plane"):
            raise PreconditionError(f"unknown root multiset kind {self.kind!r}")
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        if self.kind != "finite":
            pts = np.zeros(0, dtype=complex)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def finite(cls, points) -> "RootMultiset":
        pts = np.asarray(points, dtype=complex).reshape(-1)
        # a zero-point "finite" multiset is the empty set
        return cls("finite", pts) if pts.size else cls("empty")

    @classmethod
    def empty(cls) -> "RootMultiset":
        return cls("empty")

    @classmethod
    def whole_plane(cls) -> "RootMultiset":
        return cls("whole_plane")

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        if self.kind != "finite":
            return f"RootMultiset.{self.kind}()"
        return f"RootMultiset.finite({list(np.round(self.points, 12))})"


def cauchy_bound(p: Poly) -> float:
    """``1 + max |c_k / c_d|``: every root has modulus at most this."""
    d = degree(p)
    if d < 1:
        raise NotNonconstant("cauchy bound needs a non-constant polynomial")
    c = p.coeffs[:d + 1]
    return 1.0 + float(np.max(np.abs(c[:d] / c[d])))


def _horner_all(c, z):
    """p(z), p'(z) and the rounding scale sum|c_k||z|^k, for ascending ``c``."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    scale = np.zeros(z.shape)
    az = np.abs(z)
    ac = np.abs(c)
    for k in range(c.size - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
        scale = scale * az + ac[k]
    return p, dp, scale


def _aberth(c: np.ndarray, tol: float) -> np.ndarray:
    """Roots of the monic polynomial with ascending coefficients ``c``."""
    d = c.size - 1
    if d == 1:
        return np.array([-c[0]])
    radius = START_SCALE * (1.0 + float(np.max(np.abs(c[:d]))))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(d) / d + ANGLE_OFFSET))
    done = np.zeros(d, dtype=bool)
    resid_slack = 4.0 * (d + 1) * EPS
    for _ in range(MAX_ITER):
        p, dp, scale = _horner_all(c, z)
        at_noise = np.abs(p) <= resid_slack * scale
        done |= at_noise
        if done.all():
            return z
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff[diff == 0] = EPS
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        sums = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1.0 - ratio * sums)
        bad = ~np.isfinite(step)
        if bad.any():
            # stationary point of p: nudge off it
            step[bad] = 1e-3 * (1.0 + np.abs(z[bad])) * np.exp(1j * ANGLE_OFFSET)
        step[done] = 0.0
        z = z - step
        done |= np.abs(step) <= tol * (1.0 + np.abs(z))
    p, _, _ = _horner_all(c, z)
    tol_residual = 1e-9 * 2.0 * np.prod(1.0 + np.abs(z))
    if np.all(np.abs(p) <= tol_residual):
        return z
    raise NoConvergence(f"Aberth iteration did not converge in {MAX_ITER} steps", best=z)


def _single_linkage(z: np.ndarray, radius: float) -> list[list[int]]:
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    scale = 1.0 + np.abs(z)
    close = np.abs(z[:, None] - z[None, :]) <= radius * np.maximum(scale[:, None], scale[None, :])
    for i in range(n):
        for j in range(i + 1, n):
            if close[i, j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _multiple_root_candidate(p: Poly, center: complex, k: int):
    """Refine ``center`` as a k-fold root via Newton on p^(k-1); None if rejected."""
    c = complex(center)
    for _ in range(30):
        t, _ = taylor_coeffs(p, c, k + 1)
        # p^(k-1)(c) / p^(k)(c) = t[k-1] / (k t[k])
        if t[k] == 0:
            break
        step = t[k - 1] / (k * t[k])
        c -= step
        if abs(step) <= 4 * EPS * (1.0 + abs(c)):
            break
    t, bound = taylor_coeffs(p, c, k)
    slack = _MULTIPLICITY_SLACK * (p.cap + 1) * EPS
    if np.all(np.abs(t[:k]) <= slack * bound[:k]):
        return c
    return None


def _polish_clusters(p: Poly, z: np.ndarray) -> np.ndarray:
    # each entry: (representative value, multiplicity, frozen)
    pts = [complex(v) for v in z]
    mult = [1] * len(pts)
    for radius in _CLUSTER_RADII:
        arr = np.array(pts, dtype=complex)
        groups = _single_linkage(arr, radius)
        if all(len(g) == 1 for g in groups):
            continue
        new_pts, new_mult = [], []
        for g in groups:
            if len(g) == 1:
                new_pts.append(pts[g[0]])
                new_mult.append(mult[g[0]])
                continue
            k = sum(mult[i] for i in g)
            w = np.array([mult[i] for i in g], dtype=float)
            center = complex(np.sum(arr[g] * w) / w.sum())
            root = _multiple_root_candidate(p, center, k)
            if root is None:
                new_pts.extend(pts[i] for i in g)
                new_mult.extend(mult[i] for i in g)
            else:
                new_pts.append(root)
                new_mult.append(k)
        pts, mult = new_pts, new_mult
    return np.repeat(np.array(pts, dtype=complex), mult)


def find_roots(p: Poly, tol: float = DEFAULT_TOL, degree_mode: str = "exact",
               polish: bool = True) -> RootMultiset:
    """The multiset ``Z(p)``.

    Trailing zero coefficients are factored out first (those roots are
    exactly zero).  Returns ``RootMultiset.empty()`` for non-zero constants
    and ``RootMultiset.whole_plane()`` for the zero polynomial.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    d = degree(p, degree_mode)
    if d == ZERO_DEGREE:
        return RootMultiset.whole_plane()
    if d == 0:
        return RootMultiset.empty()
    c = np.array(p.coeffs[:d + 1], dtype=complex)
    nz = np.nonzero(np.abs(c) > 0)[0]
    m = int(nz[0])
    core = c[m:] / c[d]
    if core.size > 1:
        z = _aberth(core, tol)
        if polish and z.size > 1:
            q = Poly(core.size - 1, core)
            z = _polish_clusters(q, z)
    else:
        z = np.zeros(0, dtype=complex)
    z = np.concatenate([np.zeros(m, dtype=complex), z])
    order = np.lexsort((z.imag, z.real))
    return RootMultiset.finite(z[order])


def root_radius(p: Poly, tol: float = DEFAULT_TOL) -> float:
    """``max |u|`` over the roots of a non-constant ``p``."""
    if degree(p) < 1:
        raise NotNonconstant("root radius needs a non-constant polynomial")
    return float(np.max(np.abs(find_roots(p, tol).points)))


def hull_distance(points, z: complex) -> float:
    """Euclidean distance from ``z`` to the convex hull of ``points``."""
    pts = np.asarray(points, dtype=complex).reshape(-1)
    if pts.size == 0:
        raise PreconditionError("convex hull of an empty set")
    hull = MultiPoint([(v.real, v.imag) for v in pts]).convex_hull
    return float(hull.distance(Point(z.real, z.imag)))


def in_convex_hull(points, z: complex, tol: float = 0.0) -> bool:
    return hull_distance(points, complex(z)) <= tol
