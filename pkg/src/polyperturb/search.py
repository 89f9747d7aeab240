"""Empirical displacement suprema, divergence witnesses and the Grace classifier.

Every random draw comes from its own generator keyed by
``(seed, strategy, trial index)``, so results do not depend on evaluation
order.  Empirical suprema are lower bounds on the true constants and are
labelled as such in every report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, inf

import numpy as np

from . import distances
from .dalgebra import (DAlgOperator, Operator, apply_operator,
                       as_matrix, commutator_norm, is_invertible, membership)
from .errors import DegreeNotPreserved, NoConvergence, NotInAlgebra, SolverFailure, ZeroOperator
from .kfunctionals import k_bounds_t13, k_H_exact, k_h_exact
from .poly import Poly, degree, from_phi, from_roots
from .roots import RootMultiset, find_roots

STRATEGIES = ("iid_disk", "repeated_root", "circle", "hill_climb")
_STREAM_IDS = {"iid_disk": 1, "repeated_root": 2, "circle": 3, "hill_climb": 4, "probe": 5}

DISTANCES = {"m": distances.dist_m, "h": distances.dist_h,
             "H": distances.dist_H, "F": distances.dist_F}

LOWER_BOUND_LABEL = "empirical_sup_lower_bound"
DEGREE_PROBES = 50
CIRCLE_MIN_FRACTION = 0.25


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    trials: int = 200
    n: int | None = None
    radius: float = 2.0
    strategies: tuple = STRATEGIES
    hill_steps: int = 50
    step_scale: float = 0.1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")


def substream(seed: int, strategy: str, index: int) -> np.random.Generator:
    """Counter-based generator for one (seed, strategy, trial) triple."""
    key = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, _STREAM_IDS[strategy], index])
    return np.random.Generator(np.random.Philox(key))


def _disk_points(rng, count, radius):
    r = radius * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def sample_roots(strategy: str, rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    if strategy == "iid_disk":
        return _disk_points(rng, n, radius)
    if strategy == "repeated_root":
        return np.repeat(_disk_points(rng, 1, radius), n)
    if strategy == "circle":
        center = _disk_points(rng, 1, radius)[0]
        # tiny circles are near-multiple roots whose images are ill-conditioned
        rho = radius * rng.uniform(CIRCLE_MIN_FRACTION, 1.0)
        phase = 2 * np.pi * rng.uniform()
        return center + rho * np.exp(1j * (phase + 2 * np.pi * np.arange(n) / n))
    raise ValueError(f"no direct sampler for strategy {strategy!r}")


def sample_polynomial(strategy: str, rng: np.random.Generator, n: int, radius: float) -> Poly:
    return from_roots(sample_roots(strategy, rng, n, radius), 1.0, n)


@dataclass
class SupEstimate:
    dkind: str
    sup_value: float
    witness: Poly | None
    witness_roots: np.ndarray | None
    per_strategy: dict
    samples: int
    label: str = LOWER_BOUND_LABEL

    def as_dict(self) -> dict:
        return {"dist": self.dkind, "label": self.label, "sup_value": self.sup_value,
                "samples": self.samples, "per_strategy": dict(self.per_strategy),
                "witness_roots": None if self.witness_roots is None else list(self.witness_roots)}


def _image_roots(op: Operator, f: Poly) -> RootMultiset:
    try:
        return find_roots(apply_operator(op, f))
    except NoConvergence as exc:
        raise SolverFailure(f"root solver failed on T f: {exc}", poly=f) from exc


def _evaluate(op: Operator, roots: np.ndarray, kinds) -> dict:
    n = op.cap
    f = from_roots(roots, 1.0, n)
    zf = RootMultiset.finite(roots)
    ztf = _image_roots(op, f)
    out = {}
    for k in kinds:
        if k == "F" and (ztf.kind != "finite" or len(ztf) != len(zf)):
            raise DegreeNotPreserved("deg(Tf) != deg(f) on a sampled polynomial", poly=f)
        out[k] = DISTANCES[k](zf, ztf)
    return out


def check_degree_preservation(op: Operator, cfg: SearchConfig) -> None:
    """Probe polynomials of every degree 1..n; raise if some degree changes."""
    n = op.cap
    for i in range(DEGREE_PROBES):
        d = 1 + i % max(n, 1)
        rng = substream(cfg.seed, "probe", i)
        f = from_roots(_disk_points(rng, d, cfg.radius), 1.0, n)
        if degree(apply_operator(op, f)) != degree(f):
            raise DegreeNotPreserved(f"degree of probe {i} (degree {d}) not preserved", poly=f)


def empirical_sups(op: Operator, kinds, cfg: SearchConfig) -> dict:
    """Shared-sample version of :func:`empirical_sup` for several distances."""
    kinds = tuple(kinds)
    n = op.cap
    if n < 1:
        raise ValueError("need n >= 1")
    if "F" in kinds:
        check_degree_preservation(op, cfg)
    best = {k: -inf for k in kinds}
    best_roots = {k: None for k in kinds}
    per = {k: {} for k in kinds}
    samples = 0
    for strategy in cfg.strategies:
        if strategy == "hill_climb":
            continue
        for i in range(cfg.trials):
            roots = sample_roots(strategy, substream(cfg.seed, strategy, i), n, cfg.radius)
            vals = _evaluate(op, roots, kinds)
            samples += 1
            for k in kinds:
                v = vals[k]
                if v > per[k].get(strategy, -inf):
                    per[k][strategy] = v
                if v > best[k]:
                    best[k], best_roots[k] = v, roots
    if "hill_climb" in cfg.strategies:
        for k in kinds:
            current = best_roots[k]
            if current is None:
                current = sample_roots("iid_disk", substream(cfg.seed, "hill_climb", 0), n, cfg.radius)
            value = _evaluate(op, current, (k,))[k]
            samples += 1
            climb_best = value
            for step in range(cfg.hill_steps):
                rng = substream(cfg.seed, "hill_climb", step + 1)
                noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                cand = current + cfg.step_scale * cfg.radius * noise / np.sqrt(2)
                v = _evaluate(op, cand, (k,))[k]
                samples += 1
                if v > value:
                    current, value = cand, v
                    climb_best = max(climb_best, v)
            per[k]["hill_climb"] = climb_best
            if value > best[k]:
                best[k], best_roots[k] = value, current
    out = {}
    for k in kinds:
        roots = best_roots[k]
        out[k] = SupEstimate(dkind=k, sup_value=best[k],
                             witness=None if roots is None else from_roots(roots, 1.0, n),
                             witness_roots=roots, per_strategy=per[k], samples=samples)
    return out


def empirical_sup(op: Operator, dkind: str, cfg: SearchConfig) -> SupEstimate:
    """Largest observed distance between ``Z(f)`` and ``Z(Tf)`` over sampled ``f``."""
    if dkind not in DISTANCES:
        raise ValueError(f"unknown distance {dkind!r}")
    return empirical_sups(op, (dkind,), cfg)[dkind]


# --- divergence witnesses ---------------------------------------------------

DEFAULT_SCALES = (1.0, 10.0, 100.0, 1000.0)


@dataclass
class DivergenceTrace:
    family: str
    points: list          # (scale, f_t, distance)
    monotone: bool
    ratio: float

    @property
    def distances(self) -> list:
        return [d for _, _, d in self.points]

    def as_dict(self) -> dict:
        return {"family": self.family, "scales": [t for t, _, _ in self.points],
                "distances": self.distances, "monotone": self.monotone,
                "ratio": self.ratio}


def _family_member(family: str, n: int, t: float, u) -> tuple[Poly, np.ndarray]:
    """Polynomial of the family at scale ``t`` together with its exact roots."""
    if family == "scaling":
        roots = t * np.asarray(u, dtype=complex)
        return from_roots(roots, 1.0, n), roots
    if family in ("constant_near_one", "constant_growing"):
        # phi_n - w phi_0, roots are the n-th roots of n! w
        w = 1.0 - 0.5 / t ** n if family == "constant_near_one" else t ** n
        roots = (factorial(n) * w) ** (1.0 / n) * np.exp(2j * np.pi * np.arange(n) / n)
        return from_phi(n, np.r_[-w, np.zeros(n - 1), 1.0]), roots
    if family == "repeated_root":
        # (phi_1 - w phi_0)^n with w = t^(n/2); faster growth drowns the
        # image roots in coefficient rounding
        roots = np.full(n, t ** (n / 2), dtype=complex)
        return from_roots(roots, 1.0, n), roots
    raise ValueError(f"unknown family {family!r}")


FAMILIES = ("scaling", "constant_near_one", "constant_growing", "repeated_root")


NOISE_FLOOR = 1e-8


def _trend(values, floors) -> tuple[bool, float]:
    vals = np.asarray(values, dtype=float)
    vals = np.where(vals > np.asarray(floors), vals, 0.0)
    if np.any(np.isnan(vals)):
        return False, float("nan")
    monotone = bool(np.all(np.diff(vals) > 0))
    first, last = vals[0], vals[-1]
    if first > 0:
        ratio = float(last / first)
    else:
        ratio = inf if last > 0 else 1.0
    return monotone, ratio


def divergence_witness(op: Operator, dkind: str = "m", scales=DEFAULT_SCALES,
                       u=None, families=FAMILIES) -> list[DivergenceTrace]:
    """Distances along built-in polynomial families whose roots run off to infinity.

    ``scaling`` uses roots ``t * u`` (``u`` defaults to ``n`` copies of 1);
    ``constant_near_one`` is ``phi_n - w phi_0`` with ``1 - w = 1/(2 t^n)``;
    ``constant_growing`` is the same family with ``w = t^n``; ``repeated_root``
    is ``(z - t^(n/2))^n``.  ``Z(f)`` is taken from the exact roots of each member,
    only ``Z(Tf)`` goes through the solver.  Non-finite values become NaN;
    distances below ``NOISE_FLOOR * (1 + root scale)`` count as zero when
    judging the trend.
    """
    n = op.cap
    if u is None:
        u = np.ones(n)
    dist = DISTANCES[dkind]
    traces = []
    for family in families:
        pts, floors = [], []
        for t in scales:
            with np.errstate(over="ignore", invalid="ignore"):
                f, froots = _family_member(family, n, float(t), u)
                tf = apply_operator(op, f)
                floors.append(NOISE_FLOOR * (1.0 + float(np.max(np.abs(froots), initial=0.0))))
            if not all(np.all(np.isfinite(x)) for x in (f.coeffs, tf.coeffs, froots)):
                pts.append((float(t), f, float("nan")))
                continue
            try:
                zf, ztf = RootMultiset.finite(froots), find_roots(tf)
                if dkind == "F" and not (zf.kind == ztf.kind == "finite" and len(zf) == len(ztf)):
                    d = float("nan")
                else:
                    d = dist(zf, ztf)
            except NoConvergence:
                d = float("nan")
            pts.append((float(t), f, d))
        monotone, ratio = _trend([d for _, _, d in pts], floors)
        traces.append(DivergenceTrace(family, pts, monotone, ratio))
    return traces


# --- classification ---------------------------------------------------------

@dataclass
class ClassificationVerdict:
    is_in_algebra: bool
    commutator_norm: float
    is_invertible: bool
    verdict: str
    evidence: dict = field(default_factory=dict)
    operator: DAlgOperator | None = None

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "is_in_algebra": self.is_in_algebra,
                "commutator_norm": self.commutator_norm,
                "is_invertible": self.is_invertible, "evidence": self.evidence}


def classify(M: Operator, cfg: SearchConfig | None = None, tol: float = 1e-10,
             search: bool = True) -> ClassificationVerdict:
    """Decide whether ``M`` moves roots by a bounded amount.

    The verdict depends only on the algebraic tests (commutes with ``D``,
    invertible); the search results are attached as evidence.
    """
    cfg = cfg or SearchConfig()
    M = as_matrix(M)
    if not np.any(M.entries):
        raise ZeroOperator("the zero operator has no root multiset to compare")
    comm = commutator_norm(M)
    try:
        T = membership(M, tol)
        in_alg = True
        invertible = is_invertible(T)
    except NotInAlgebra:
        T = None
        in_alg = False
        invertible = bool(np.linalg.matrix_rank(M.entries) == M.cap + 1)
    grace = in_alg and invertible
    evidence: dict = {}
    if grace:
        bounds = k_bounds_t13(T)
        evidence["K_h_exact"] = k_h_exact(T)
        evidence["K_H_exact"] = k_H_exact(T)
        evidence["t13"] = bounds.as_dict()
        if search and T.cap >= 1:
            sups = empirical_sups(T, ("m", "h", "H", "F"), cfg)
            evidence["empirical"] = {k: s.as_dict() for k, s in sups.items()}
    elif search and M.cap >= 1:
        traces = divergence_witness(M, "m")
        evidence["divergence"] = [tr.as_dict() for tr in traces]
        growing = [tr for tr in traces if tr.monotone]
        if growing:
            best = max(growing, key=lambda tr: tr.ratio)
            evidence["strongest_family"] = best.family
    return ClassificationVerdict(is_in_algebra=in_alg, commutator_norm=comm,
                                 is_invertible=invertible,
                                 verdict="Grace" if grace else "NotGrace",
                                 evidence=evidence, operator=T)
