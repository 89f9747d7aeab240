import json

import numpy as np
import pytest

from polyperturb import jsonio
from polyperturb.cli import main

SHIFT1 = '{"kind":"shift","n":2,"alpha":[1,0]}'
CUBIC_T = '{"kind":"dalg","n":3,"a":[[1,0],[0.6666666666666666,0],[0.2222222222222222,0],[-0.14814814814814814,0]]}'
F = '{"n":3,"basis":"monomial","coeffs":[[1,0],[-1,0],[-1,0],[1,0]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_apply_shift(capsys):
    code, out, _ = run(capsys, "apply", SHIFT1, '{"n":2,"coeffs":[[0,0],[0,0],[1,0]]}')
    assert code == 0
    np.testing.assert_allclose(jsonio.dec_poly(json.loads(out)).coeffs, [1, 2, 1])


def test_apply_reflect(capsys):
    code, out, _ = run(capsys, "apply", '{"kind":"reflect","n":2}', '{"coeffs":[0,1,1]}')
    np.testing.assert_allclose(jsonio.dec_poly(json.loads(out)).coeffs, [0, -1, 1])


def test_apply_then_dist_round_trip(capsys):
    code, out, _ = run(capsys, "apply", CUBIC_T, F)
    assert code == 0
    code, out, _ = run(capsys, "dist", F, out)
    doc = json.loads(out)
    assert doc["d_F"] == pytest.approx(2, abs=1e-9)


def test_dist_conventions(capsys):
    code, out, _ = run(capsys, "dist", '{"n":2,"coeffs":[1]}', '{"n":2,"coeffs":[1,1]}')
    doc = json.loads(out)
    assert doc["d_m"] == "inf" and doc["d_F"] is None
    code, out, _ = run(capsys, "dist", F, F)
    doc = json.loads(out)
    assert doc["d_m"] == doc["d_H"] == doc["d_F"] == 0


def test_roots_accepts_file(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(F)
    code, out, _ = run(capsys, "roots", str(path))
    pts = jsonio.dec_multiset(json.loads(out)).points
    np.testing.assert_allclose(sorted(pts.real), [-1, 1, 1], atol=1e-12)


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", '{"kind":"hk","n":4,"k":1,"gamma":[0.5,0]}')
    doc = json.loads(out)
    assert doc["K_H_exact"] == pytest.approx(2.0, abs=1e-9)
    assert set(doc) == {"K_h_exact", "K_H_exact", "t13", "krks_factor"}


def test_classify_and_search(capsys):
    code, out, _ = run(capsys, "classify", '{"kind":"reflect","n":3}')
    assert json.loads(out)["verdict"] == "NotGrace"
    code, out, _ = run(capsys, "search", '{"kind":"shift","n":3,"alpha":[2,0]}', "--dist", "h",
                       "--trials", "20", "--seed", "1")
    doc = json.loads(out)
    assert doc["sup_value"] == pytest.approx(2, abs=1e-6)
    assert doc["label"] == "empirical_sup_lower_bound"


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "table", "bounds", SHIFT1)
    assert code == 0 and out.startswith("K_H_exact")
    code, out, _ = run(capsys, "bounds", SHIFT1, "--format", "csv")
    assert out.splitlines()[0] == "key,value"


def test_grace(capsys):
    disk = '{"kind":"disk","center":[0,0],"radius":1}'
    code, out, _ = run(capsys, "grace", '{"coeffs":[0,0,1]}', '{"coeffs":[0,0,1]}', disk)
    assert code == 0 and json.loads(out)["passed"] is True


@pytest.mark.parametrize("argv,expected", [
    (["bounds", "{bad"], 2),
    (["bounds", '{"kind":"warp","n":2}'], 2),
    (["nonsense"], 2),
    (["search", SHIFT1, "--strategies", "bogus"], 2),
    (["apply", SHIFT1, '{"n":3,"coeffs":[0,0,1,0]}'], 3),
    (["bounds", '{"kind":"reflect","n":3}'], 3),
    (["grace", '{"coeffs":[1,0,1]}', '{"coeffs":[1,0,1]}', '{"kind":"disk","center":[0,0],"radius":1}'], 3),
    (["search", '{"kind":"dalg","a":[0,1,0]}', "--dist", "F"], 3),
])
def test_exit_codes(capsys, argv, expected):
    code, out, err = run(capsys, *argv)
    assert code == expected
    assert out == ""


def test_numerical_failure_exit(capsys, monkeypatch):
    from polyperturb import cli
    from polyperturb.errors import NoConvergence

    def boom(*a, **k):
        raise NoConvergence("forced")
    monkeypatch.setattr(cli, "find_roots", boom)
    code, _, err = run(capsys, "roots", F)
    assert code == 4 and "forced" in err


def test_verify_failure_exit(capsys, monkeypatch):
    from polyperturb import cli
    from polyperturb.checks import CheckResult

    monkeypatch.setattr(cli, "run_suite", lambda suite, seed: [
        CheckResult(1, "x", "c", "e", "o", 1.0, False)])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and json.loads(out)["passed"] is False


def test_poly_schema_round_trip():
    p = jsonio.dec_poly({"n": 2, "basis": "phi", "coeffs": [[1, 0], [0, 0], [2, 0]]})
    np.testing.assert_allclose(p.coeffs, [1, 0, 1])
    q = jsonio.dec_poly(json.loads(jsonio.dumps(jsonio.enc_poly(p, "phi"))))
    np.testing.assert_allclose(q.coeffs, p.coeffs)
