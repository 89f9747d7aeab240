import numpy as np
import pytest

from polyperturb import jsonio
from polyperturb.dalgebra import (DAlgOperator, derivative_operator, matrix_of,
                                  reflection_matrix, shift_operator)
from polyperturb.errors import DegreeNotPreserved, ZeroOperator
from polyperturb.dalgebra import MatrixOperator
from polyperturb.search import (LOWER_BOUND_LABEL, SearchConfig, classify, divergence_witness,
                                empirical_sup, empirical_sups, sample_polynomial, substream)

SMALL = SearchConfig(seed=7, trials=20, hill_steps=10)


def test_substreams_are_reproducible():
    a = sample_polynomial("iid_disk", substream(1, "iid_disk", 5), 4, 2.0)
    b = sample_polynomial("iid_disk", substream(1, "iid_disk", 5), 4, 2.0)
    c = sample_polynomial("iid_disk", substream(1, "iid_disk", 6), 4, 2.0)
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    assert not np.array_equal(a.coeffs, c.coeffs)


def test_sampling_strategies():
    rng = substream(0, "repeated_root", 0)
    p = sample_polynomial("repeated_root", rng, 3, 2.0)
    w = -p.coeffs[2] / 3
    np.testing.assert_allclose(p.coeffs, [-w ** 3, 3 * w ** 2, -3 * w, 1], atol=1e-12)
    zero_disk = sample_polynomial("iid_disk", substream(0, "iid_disk", 0), 3, 1e-300)
    np.testing.assert_allclose(zero_disk.coeffs, [0, 0, 0, 1], atol=1e-200)
    with pytest.raises(ValueError):
        sample_polynomial("hill_climb", rng, 3, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(trials=0)
    with pytest.raises(ValueError):
        SearchConfig(strategies=("nope",))


def test_shift_sup_is_alpha():
    est = empirical_sup(shift_operator(2.0, 3), "h", SMALL)
    assert est.label == LOWER_BOUND_LABEL
    assert est.sup_value == pytest.approx(2.0, abs=1e-6)


def test_determinism():
    T = DAlgOperator(3, [1, 0.4, -0.3j, 0.2])
    a = jsonio.dumps(empirical_sups(T, ("m", "F"), SMALL)["F"].as_dict())
    b = jsonio.dumps(empirical_sups(T, ("m", "F"), SMALL)["F"].as_dict())
    assert a == b
    v1 = jsonio.dumps(classify(matrix_of(T), SMALL).as_dict())
    assert v1 == jsonio.dumps(classify(matrix_of(T), SMALL).as_dict())


def test_grace_evidence_is_sound():
    T = DAlgOperator(4, [1, -0.5, 0.3 + 0.2j, 0.1, -0.05])
    v = classify(matrix_of(T), SMALL)
    assert v.verdict == "Grace"
    ev = v.evidence
    assert ev["empirical"]["h"]["sup_value"] <= ev["K_h_exact"] + 1e-7
    assert ev["empirical"]["H"]["sup_value"] <= ev["K_H_exact"] + 1e-7
    assert ev["empirical"]["F"]["sup_value"] <= ev["t13"]["K_F_ub"] + 1e-7


def test_bottleneck_search_needs_degree_preservation():
    with pytest.raises(DegreeNotPreserved):
        empirical_sup(derivative_operator(3), "F", SMALL)


def test_zero_operator():
    with pytest.raises(ZeroOperator):
        classify(MatrixOperator(2, np.zeros((3, 3))))


def test_reflection_divergence_is_exact():
    traces = divergence_witness(reflection_matrix(3), "m")
    scaling = next(t for t in traces if t.family == "scaling")
    assert scaling.distances == pytest.approx([2, 20, 200, 2000], abs=1e-6)
    assert scaling.monotone and scaling.ratio == pytest.approx(1000)


def test_derivative_divergence():
    v = classify(derivative_operator(3))
    assert v.verdict == "NotGrace" and v.is_in_algebra and not v.is_invertible
    assert v.evidence["strongest_family"] == "constant_growing"


def test_zeroed_a0_rejected(rng):
    T = DAlgOperator(3, [0, 1, 2, 3])
    assert classify(matrix_of(T), search=False).verdict == "NotGrace"
