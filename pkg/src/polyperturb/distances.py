"""Distances between root multisets.

``dist_m`` (closest pair), ``dist_h`` (asymmetric Hausdorff), ``dist_H``
(Hausdorff) and ``dist_F`` (bottleneck matching).  The first three accept
the degenerate multisets: distance to an empty set is ``+inf`` (0 between
two empty sets) and any distance involving the whole plane is 0.
"""

from __future__ import annotations

from itertools import permutations
from math import inf

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import CardinalityMismatch, DegenerateVariant, TooLarge
from .roots import RootMultiset

BRUTE_FORCE_MAX = 8


def _as_multiset(x) -> RootMultiset:
    if isinstance(x, RootMultiset):
        return x
    return RootMultiset.finite(np.asarray(x, dtype=complex).reshape(-1))


def _degenerate(A: RootMultiset, B: RootMultiset) -> float | None:
    if A.kind == "empty" or B.kind == "empty":
        return 0.0 if A.kind == B.kind else inf
    if A.kind == "whole_plane" or B.kind == "whole_plane":
        return 0.0
    return None


def pairwise(A, B) -> np.ndarray:
    """Table ``|a_i - b_j|``."""
    a = np.asarray(getattr(A, "points", A), dtype=complex).reshape(-1)
    b = np.asarray(getattr(B, "points", B), dtype=complex).reshape(-1)
    return np.abs(a[:, None] - b[None, :])


def dist_m(A, B) -> float:
    A, B = _as_multiset(A), _as_multiset(B)
    special = _degenerate(A, B)
    if special is not None:
        return special
    return float(pairwise(A, B).min())


def dist_h(A, B) -> float:
    """How far the points of ``B`` stray from ``A``: ``max_{y in B} min_{x in A} |x - y|``."""
    A, B = _as_multiset(A), _as_multiset(B)
    special = _degenerate(A, B)
    if special is not None:
        return special
    return float(pairwise(A, B).min(axis=0).max())


def dist_H(A, B) -> float:
    return max(dist_h(A, B), dist_h(B, A))


def _finite_pair(U, V):
    U, V = _as_multiset(U), _as_multiset(V)
    if U.kind != "finite" or V.kind != "finite":
        raise DegenerateVariant("bottleneck distance needs two finite multisets")
    if len(U) != len(V):
        raise CardinalityMismatch(f"{len(U)} points vs {len(V)} points")
    return U, V


def _perfect_matching(mask: np.ndarray):
    match = maximum_bipartite_matching(csr_matrix(mask.astype(np.int8)), perm_type="column")
    return match if np.all(match >= 0) else None


def bottleneck_matching(U, V) -> tuple[float, list[tuple[int, int]]]:
    """Exact bottleneck value and an optimal pairing ``[(i, sigma(i)), ...]``.

    The optimum is one of the table entries: binary search over the sorted
    distinct entries, testing each threshold for a perfect matching.
    """
    U, V = _finite_pair(U, V)
    table = pairwise(U, V)
    values = np.unique(table)
    lo, hi = 0, values.size - 1
    best = _perfect_matching(table <= values[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match = _perfect_matching(table <= values[mid])
        if match is None:
            lo = mid + 1
        else:
            hi, best = mid, match
    if best is None:  # pragma: no cover - the largest entry always admits a matching
        raise RuntimeError("bottleneck search failed")
    return float(values[lo]), [(i, int(j)) for i, j in enumerate(best)]


def dist_F(U, V) -> float:
    return bottleneck_matching(U, V)[0]


def dist_F_bruteforce(U, V) -> float:
    """Minimum over all permutations; a test oracle for small multisets."""
    U, V = _finite_pair(U, V)
    m = len(U)
    if m > BRUTE_FORCE_MAX:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_MAX} points, got {m}")
    table = pairwise(U, V)
    rows = np.arange(m)
    return float(min(table[rows, list(p)].max() for p in permutations(range(m))))


def all_distances(A: RootMultiset, B: RootMultiset) -> dict:
    """All four distances; ``d_F`` and the matching are ``None`` when undefined."""
    out = {"d_m": dist_m(A, B), "d_h": dist_h(A, B), "d_H": dist_H(A, B),
           "d_F": None, "matching": None}
    if A.kind == B.kind == "finite" and len(A) == len(B):
        out["d_F"], out["matching"] = bottleneck_matching(A, B)
    return out
