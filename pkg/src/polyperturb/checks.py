"""Programmatic acceptance checks, shared by ``polyperturb verify`` and the test suite.

Each check returns a :class:`CheckResult`; randomized checks draw from a
generator keyed by ``(seed, check number)`` so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, sqrt

import numpy as np

from . import distances as dist
from .dalgebra import (DAlgOperator, add_subleading_matrix, add_value_at_zero_matrix, apply,
                       derivative_operator, hk_operator, invert, matrix_of,
                       reflection_matrix, shift_operator)
from .kfunctionals import (k_bounds_t13, k_F_vs_k_H_factor, k_H_exact, k_h_exact,
                           k_h_inverse_h1_bracket, k_hk_exact, quadratic_image_roots)
from .poly import Poly, from_phi, from_roots, phi
from .roots import RootMultiset, find_roots
from .search import SearchConfig, classify, divergence_witness, empirical_sups
from .star import (ClosedDisk, check_composite_containment, check_grace, check_operator_grace,
                   random_apolar_pair)


@dataclass
class CheckResult:
    number: int
    name: str
    claim: str
    expected: str
    observed: str
    margin: float
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name}: {self.observed}"

    def as_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "claim": self.claim,
                "expected": self.expected, "observed": self.observed,
                "margin": self.margin, "passed": self.passed}


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, number]))


def _disk(rng, count, radius=2.0):
    return radius * np.sqrt(rng.uniform(size=count)) * np.exp(2j * np.pi * rng.uniform(size=count))


def random_invertible(rng, n: int) -> DAlgOperator:
    """``a_0`` with modulus in ``[0.5, 2]``, the other coefficients in the radius-2 disk."""
    a = _disk(rng, n + 1)
    a[0] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return DAlgOperator(n, a)


def random_poly(rng, n: int, deg: int | None = None) -> tuple[Poly, np.ndarray]:
    deg = int(rng.integers(1, n + 1)) if deg is None else deg
    roots = _disk(rng, deg)
    return from_roots(roots, 1.0, n), roots


def _fmt(x) -> str:
    return f"{x:.10g}"


# --- closed-form examples -----------------------------------------------------

def check_cubic_example(seed: int = 0) -> CheckResult:
    T = DAlgOperator(3, [1, 2 / 3, 2 / 9, -4 / 27])
    target = (2 / 3) * (1 + 2 ** (1 / 3))
    kh = k_h_exact(T)
    inv_radius = float(np.max(np.abs(find_roots(apply(invert(T), phi(3, 3))).points)))
    f = from_roots([1, 1, -1], 1.0, 3)
    g = from_roots([-1, -1, 1], 1.0, 3)
    Tf = apply(T, f)
    coeff_err = float(np.max(np.abs(Tf.coeffs - g.coeffs)))
    dF = dist.dist_F(find_roots(f), find_roots(Tf))
    kH = k_H_exact(T)
    sup_F = empirical_sups(T, ("F",), SearchConfig(seed=seed, trials=50, hill_steps=20))["F"]
    kF_lower = max(dF, sup_F.sup_value)
    errs = [abs(kh - target), abs(inv_radius - target), abs(dF - 2.0)]
    ok = (errs[0] <= 1e-9 and errs[1] <= 1e-9 and coeff_err <= 1e-10 and errs[2] <= 1e-9
          and kH < 2.0 <= kF_lower + 1e-9)
    return CheckResult(
        1, "cubic_example", "K_H(T) = (2/3)(1+2^(1/3)) < 2 <= K_F(T) for T = I + 2D/3 + 2D^2/9 - 4D^3/27",
        f"K_h = rho[T^-1 phi_3] = {_fmt(target)}, Tf = g, d_F = 2",
        f"K_h={_fmt(kh)} rho_inv={_fmt(inv_radius)} coeff_err={coeff_err:.1e} d_F={_fmt(dF)} "
        f"K_H={_fmt(kH)} K_F_lower={_fmt(kF_lower)}",
        max(max(errs), coeff_err), ok,
        {"K_h": kh, "rho_inv": inv_radius, "K_H": kH, "d_F": dF, "K_F_lower": kF_lower})


def check_shift(seed: int = 0) -> CheckResult:
    alpha = 1 + 2j
    S = shift_operator(alpha, 4)
    target = sqrt(5)
    kh, kH = k_h_exact(S), k_H_exact(S)
    cfg = SearchConfig(seed=seed, trials=300, hill_steps=50)
    sups = empirical_sups(S, ("m", "h", "H", "F"), cfg)
    values = {k: s.sup_value for k, s in sups.items()}
    samples = min(s.samples for s in sups.values())
    ok_exact = abs(kh - target) <= 1e-9 and abs(kH - target) <= 1e-9
    ok_sup = all(target - 1e-6 <= v <= target + 1e-7 for v in values.values())
    margin = max(abs(v - target) for v in values.values())
    return CheckResult(
        2, "shift_operator", "every displacement constant of f -> f(. + alpha) equals |alpha|",
        "K_h = K_H = sqrt(5) +- 1e-9; sups in [sqrt5 - 1e-6, sqrt5 + 1e-7] over >= 1000 samples",
        f"K_h={_fmt(kh)} K_H={_fmt(kH)} sups=" +
        ",".join(f"{k}:{v:.12f}" for k, v in values.items()) + f" samples={samples}",
        margin, ok_exact and ok_sup and samples >= 1000, {"sups": values, "samples": samples})


def check_hk(seed: int = 0) -> CheckResult:
    cases = [(5, 2, 0.3), (6, 1, -2.0), (7, 3, 0.5j)]
    errs, obs = [], []
    for n, k, gamma in cases:
        closed = (abs(gamma) * factorial(n) / factorial(n - k)) ** (1 / k)
        got = k_h_exact(hk_operator(k, gamma, n))
        errs.append(max(abs(got - closed), abs(k_hk_exact(n, k, gamma) - closed)))
        obs.append(f"({n},{k},{gamma}):{got:.10f}/{closed:.10f}")
    return CheckResult(3, "hk_closed_form", "K_h(I - gamma D^k) = (|gamma| n!/(n-k)!)^(1/k)",
                       "match within 1e-9", " ".join(obs), max(errs), max(errs) <= 1e-9)


def check_inverse_h1(seed: int = 0) -> CheckResult:
    n, gamma = 4, 1.0
    H = hk_operator(1, gamma, n)
    kh_inv = k_h_exact(invert(H))
    bracket = k_h_inverse_h1_bracket(n, gamma)
    lo, hi = 24 ** 0.25, 4.0
    in_bracket = lo - 1e-9 <= kh_inv <= hi + 1e-9
    image = apply(H, bracket.witness)
    expected = from_phi(n, [-gamma ** n, 0, 0, 0, 1])
    witness_err = float(np.max(np.abs(image.coeffs - expected.coeffs)))
    kH = k_H_exact(H)
    ok = in_bracket and witness_err <= 1e-12 and abs(kH - 4.0) <= 1e-9
    return CheckResult(
        4, "inverse_h1", "K_h((I - D)^-1) in [24^(1/4), 4] on P_4 and K_H(I - D) = 4",
        "bracket holds, witness image = phi_4 - 1 within 1e-12, K_H = 4 within 1e-9",
        f"K_h_inv={_fmt(kh_inv)} in [{lo:.6f},{hi}] witness_err={witness_err:.1e} K_H={_fmt(kH)}",
        max(witness_err, abs(kH - 4.0)), ok)


def check_quadratic(seed: int = 0) -> CheckResult:
    rng = _rng(seed, 10)
    worst_match, worst_excess, fails, single_fails = 0.0, -np.inf, 0, 0
    for _ in range(200):
        while True:
            a0 = _disk(rng, 1, 3.0)[0]
            if abs(a0) >= 0.1:
                break
        a1, a2, w1, w2 = _disk(rng, 4, 3.0)
        q = quadratic_image_roots(a0, a1, a2, w1, w2)
        T = DAlgOperator(2, [a0, a1, a2])
        image = find_roots(apply(T, from_roots([w1, w2], 1.0, 2)))
        closed = RootMultiset.finite([q.z1, q.z2])
        match = dist.dist_F(closed, image)
        spread = dist.dist_h(RootMultiset.finite([w1, w2]), closed)
        excess = spread - q.displacement_bound
        # the bound with a2/a0 in place of 2 a2/a0 is not valid; count how often it fails
        d1 = a1 / a0
        single = abs(d1) + sqrt(abs(d1 * d1 - a2 / a0))
        single_fails += spread > single + 1e-9
        worst_match = max(worst_match, match)
        worst_excess = max(worst_excess, excess)
        if match > 1e-9 or excess > 1e-9:
            fails += 1
    return CheckResult(
        10, "quadratic_closed_form", "closed-form image roots for degree-2 operators and their displacement bound",
        "closed form = solver within 1e-9; roots within |d1| + sqrt|d1^2 - 2 a2/a0| + 1e-9 of {w1, w2}",
        f"worst_mismatch={worst_match:.1e} worst_bound_excess={worst_excess:.1e} failures={fails}/200 "
        f"(bound without the factor 2 fails on {single_fails}/200)",
        worst_match, fails == 0, {"single_factor_failures": int(single_fails)})


# --- randomized theorem audits ------------------------------------------------

@lru_cache(maxsize=4)
def operator_audit_sample(seed: int = 0, operators: int = 500, polys: int = 20):
    """Shared (T, f) sample: distances between Z(f) and Z(Tf) plus the constants of T."""
    rng = _rng(seed, 5)
    rows = []
    for _ in range(operators):
        n = int(rng.integers(1, 9))
        T = random_invertible(rng, n)
        kh = k_h_exact(T)
        b = k_bounds_t13(T)
        eq = dist.dist_h(RootMultiset.finite(np.zeros(n)), find_roots(apply(T, phi(n, n))))
        for _ in range(polys):
            f, roots = random_poly(rng, n)
            zf = RootMultiset.finite(roots)
            ztf = find_roots(apply(T, f))
            rows.append({"n": n, "K_h": kh, "sum_gamma": b.sum_gamma, "attained": eq,
                         "d_m": dist.dist_m(zf, ztf), "d_h": dist.dist_h(zf, ztf),
                         "d_H": dist.dist_H(zf, ztf), "d_F": dist.dist_F(zf, ztf)})
    return rows


def check_kh_audit(seed: int = 0) -> CheckResult:
    rows = operator_audit_sample(seed)
    excess = np.array([r["d_h"] - r["K_h"] for r in rows])
    violations = int(np.sum(excess > 1e-7))
    attain = max(abs(r["attained"] - r["K_h"]) for r in rows)
    return CheckResult(
        5, "kh_exact_audit", "d_h(Z(f), Z(Tf)) <= rho[T phi_n], with equality at f = phi_n",
        "0 violations at slack 1e-7; equality within 1e-9",
        f"pairs={len(rows)} violations={violations} max_excess={excess.max():.2e} attain_err={attain:.1e}",
        float(excess.max()), violations == 0 and attain <= 1e-9)


def check_factor_bound_audit(seed: int = 0) -> CheckResult:
    rows = operator_audit_sample(seed)
    v = {"h": 0, "H": 0, "F": 0}
    worst = -np.inf
    for r in rows:
        b = r["n"] * r["sum_gamma"]
        for key, value, bound in (("h", r["d_h"], b), ("H", r["d_H"], b), ("F", r["d_F"], r["n"] * b)):
            worst = max(worst, value - bound)
            if value > bound + 1e-7:
                v[key] += 1
    return CheckResult(
        6, "factor_bound_audit", "d_h, d_H <= n sum|gamma_j| and d_F <= n^2 sum|gamma_j|",
        "0 violations at slack 1e-7",
        f"pairs={len(rows)} violations={v} max_excess={worst:.2e}", worst, sum(v.values()) == 0)


def _cover_disk(points: np.ndarray) -> ClosedDisk:
    c = complex(np.mean(points))
    return ClosedDisk(c, max(float(np.max(np.abs(points - c))), 1e-12))


def check_grace_audits(seed: int = 0) -> CheckResult:
    rng = _rng(seed, 7)
    grace_fail = 0
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        f, g = random_apolar_pair(m, rng)
        rep = check_grace(f, g, _cover_disk(find_roots(g).points))
        grace_fail += not rep.passed
    comp_fail = 0
    for _ in range(500):
        m = int(rng.integers(2, 9))
        f, _ = random_poly(rng, m, m)
        g, groots = random_poly(rng, m, m)
        rep = check_composite_containment(f, g, _cover_disk(groots))
        comp_fail += not rep.passed
    op_fail = 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        T = random_invertible(rng, n)
        rho = float(np.max(np.abs(find_roots(apply(T, phi(n, n))).points)))
        f, _ = random_poly(rng, n)
        rep = check_operator_grace(T, f, ClosedDisk(0j, max(rho, 1e-12)))
        op_fail += not rep.passed
    ok = grace_fail == comp_fail == op_fail == 0
    return CheckResult(
        7, "grace_audits", "apolar pairs, composite products and invertible operators respect circular domains",
        "1000/1000, 500/500, 200/200 pass",
        f"grace={1000 - grace_fail}/1000 composite={500 - comp_fail}/500 operator={200 - op_fail}/200",
        float(grace_fail + comp_fail + op_fail), ok)


BAD_OPERATORS = {
    "reflect": reflection_matrix,
    "derivative": derivative_operator,
    "add_value_at_zero": add_value_at_zero_matrix,
    "add_subleading": add_subleading_matrix,
}


def check_classifier(seed: int = 0) -> CheckResult:
    rng = _rng(seed, 8)
    grace_ok = rejected_ok = 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        T = random_invertible(rng, n)
        grace_ok += classify(matrix_of(T), search=False).verdict == "Grace"
        a = T.a.copy()
        a[0] = 0
        rejected_ok += classify(matrix_of(DAlgOperator(n, a)), search=False).verdict == "NotGrace"
    n = 3
    bad_ok, notes = 0, []
    for name, build in BAD_OPERATORS.items():
        v = classify(build(n))
        traces = divergence_witness(build(n), "m")
        growing = [t for t in traces if t.monotone and t.ratio >= 10]
        good = v.verdict == "NotGrace" and bool(growing)
        if name == "reflect":
            scaling = next(t for t in traces if t.family == "scaling")
            err = max(abs(d - 2 * s) for s, _, d in scaling.points)
            good = good and err <= 1e-6
            notes.append(f"reflect_2t_err={err:.1e}")
        bad_ok += good
        notes.append(f"{name}:{v.verdict}/{growing[0].family if growing else 'none'}")
    ok = grace_ok == 200 and rejected_ok == 200 and bad_ok == len(BAD_OPERATORS)
    return CheckResult(
        8, "classifier_ground_truth", "invertible algebra elements are Grace; R, D and two rank-one perturbations are not",
        "200/200 Grace, 200/200 a0=0 rejected, 4/4 NotGrace with >= 10x divergence",
        f"grace={grace_ok}/200 zeroed_rejected={rejected_ok}/200 bad={bad_ok}/4 " + " ".join(notes),
        float(400 + len(BAD_OPERATORS) - grace_ok - rejected_ok - bad_ok), ok)


def _random_multiset(rng, m: int) -> np.ndarray:
    if rng.uniform() < 0.3:
        # small integer grid: many ties in the distance table
        return (rng.integers(-2, 3, m) + 1j * rng.integers(-2, 3, m)).astype(complex)
    return _disk(rng, m)


def check_bottleneck_oracle(seed: int = 0) -> CheckResult:
    rng = _rng(seed, 9)
    mismatches = 0
    for _ in range(1000):
        m = int(rng.integers(1, 8))
        U, V = _random_multiset(rng, m), _random_multiset(rng, m)
        mismatches += dist.dist_F(U, V) != dist.dist_F_bruteforce(U, V)
    return CheckResult(9, "bottleneck_oracle", "matching-based d_F equals the permutation minimum",
                       "exact equality on 1000 pairs, m <= 7",
                       f"mismatches={mismatches}/1000", float(mismatches), mismatches == 0)


def check_metric_suite(seed: int = 0) -> CheckResult:
    rng = _rng(seed, 11)
    counts = {"symmetry": 0, "identity": 0, "triangle_H": 0, "triangle_F": 0, "chain": 0, "factor": 0}
    for _ in range(1000):
        m = int(rng.integers(1, 8))
        A, B, C = (_random_multiset(rng, m) for _ in range(3))
        for d, tri in ((dist.dist_H, "triangle_H"), (dist.dist_F, "triangle_F")):
            if d(A, B) != d(B, A):
                counts["symmetry"] += 1
            if d(A, A) != 0 or d(A, rng.permutation(A)) > 1e-9:
                counts["identity"] += 1
            if d(A, C) > d(A, B) + d(B, C) + 1e-12:
                counts[tri] += 1
        chain = [dist.dist_m(A, B), dist.dist_h(A, B), dist.dist_H(A, B), dist.dist_F(A, B)]
        counts["chain"] += any(x > y for x, y in zip(chain, chain[1:]))
    pairs = 0
    for r in operator_audit_sample(seed):
        chain = [r["d_m"], r["d_h"], r["d_H"], r["d_F"]]
        counts["chain"] += any(x > y for x, y in zip(chain, chain[1:]))
        if r["n"] >= 2:
            pairs += 1
            counts["factor"] += r["d_F"] > k_F_vs_k_H_factor(r["n"]) * r["d_H"]
    ok = sum(counts.values()) == 0
    return CheckResult(
        11, "metric_suite", "metric axioms, distance chain and d_F <= e n^3 ln n d_H",
        "0 violations", f"violations={counts} factor_pairs={pairs}",
        float(sum(counts.values())), ok)


EXAMPLES = (check_cubic_example, check_shift, check_hk, check_inverse_h1, check_quadratic)
THEOREMS = (check_kh_audit, check_factor_bound_audit, check_grace_audits, check_classifier,
            check_bottleneck_oracle, check_metric_suite)
SUITES = {"examples": EXAMPLES, "theorems": THEOREMS, "all": EXAMPLES + THEOREMS}


def run_suite(suite: str = "all", seed: int = 0) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    results = [check(seed) for check in SUITES[suite]]
    return sorted(results, key=lambda r: r.number)
