import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aradius.cli import main
from aradius.errors import MalformedMatrixError
from aradius.matrix_io import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix

J = np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def files(tmp_path):
    def put(name, M):
        p = tmp_path / name
        save_matrix(M, p)
        return str(p)

    return put


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(arrays(np.float64, (3, 3), elements=finite), arrays(np.float64, (3, 3), elements=finite))
def test_matrix_json_round_trip(re, im):
    M = re + 1j * im
    assert np.array_equal(matrix_from_dict(json.loads(json.dumps(matrix_to_dict(M)))), M)


def test_malformed_matrix_dicts():
    for bad in ({"n": 2, "re": [[1]], "im": [[0]]}, {"re": [[1]]}, {"n": 1, "re": [["a"]], "im": [[0]]},
                {"n": True, "re": [[1]], "im": [[0]]}, [1, 2]):
        with pytest.raises(MalformedMatrixError):
            matrix_from_dict(bad)


def test_compute_jordan(capsys, files):
    code, out, _ = run(capsys, "compute", "--weight", files("I.json", np.eye(2)), "--matrix", files("J.json", J))
    assert code == 0
    rep = json.loads(out)
    assert rep["membership"] is True
    assert rep["a_numerical_radius"]["value"] == pytest.approx(0.5, abs=1e-12)
    assert rep["a_seminorm"]["value"] == pytest.approx(1.0, abs=1e-12)
    assert rep["a_spectral_radius"]["value"] == pytest.approx(0.0, abs=1e-12)
    assert rep["distance_to_scalars"]["value"] == pytest.approx(0.5, abs=1e-9)
    for key in ("a_seminorm", "a_numerical_radius", "weighted_radius", "a_spectral_radius", "distance_to_scalars"):
        assert "certified_error" in rep[key]
    assert np.allclose(matrix_from_dict(rep["a_adjoint"]), J.T)


def test_compute_one_zero_pair(capsys, files):
    x = np.array([[1, 2], [0.5j, 0]])
    code, out, _ = run(capsys, "compute", "--weight", files("A.json", np.array([[2, 1j], [-1j, 1]])),
                       "--matrix", files("x.json", x), "--t", "1", "--s", "0")
    rep = json.loads(out)
    assert code == 0
    assert rep["weighted_radius"]["value"] == pytest.approx(rep["a_seminorm"]["value"], rel=1e-12)


def test_compute_non_member_prints_infinite(capsys, files, tmp_path):
    out_path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "compute", "--weight", files("D.json", np.diag([1.0, 0.0])),
                       "--matrix", files("J.json", J), "--out", str(out_path))
    assert code == 0
    rep = json.loads(out_path.read_text())
    assert rep["membership"] is False
    assert rep["a_numerical_radius"] == {"finite": False, "value": "inf"}
    assert rep["a_seminorm"] == {"finite": False, "value": "inf"}


def test_exit_codes(capsys, files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    I2, I3 = files("I.json", np.eye(2)), files("I3.json", np.eye(3))
    assert run(capsys, "compute", "--weight", str(tmp_path / "missing.json"), "--matrix", I2)[0] == 2
    assert run(capsys, "compute", "--weight", str(bad), "--matrix", I2)[0] == 3
    assert run(capsys, "compute", "--weight", files("neg.json", np.diag([1.0, -1.0])), "--matrix", I2)[0] == 3
    assert run(capsys, "compute", "--weight", I2, "--matrix", I3)[0] == 4
    code, _, err = run(capsys, "range", "--weight", files("D.json", np.diag([1.0, 0.0])), "--matrix",
                       files("J.json", J), "--out", str(tmp_path / "r.csv"))
    assert code == 5 and "admissible" in err
    assert run(capsys, "search", "tightness", "--checker", "nope", "--budget", "5")[0] == 2
    assert run(capsys, "search", "kappa", "--budget", "0")[0] == 2
    assert run(capsys, "index", "--weight", I2, "--budget", "0")[0] == 2
    assert run(capsys, "verify", "--checkers", "nope")[0] == 2
    assert run(capsys, "verify", "--trials", "0")[0] == 2


def test_range_commands(capsys, files, tmp_path):
    csv = tmp_path / "r.csv"
    code, out, _ = run(capsys, "range", "--weight", files("I.json", np.eye(2)), "--matrix",
                       files("E.json", np.eye(2)), "--out", str(csv), "--n-random", "20", "--n-boundary", "10")
    assert code == 0 and out.startswith("radius_estimate")
    rows = [ln.split(",") for ln in csv.read_text().splitlines()[1:]]
    assert len(rows) == 30
    assert all(float(r[0]) == pytest.approx(1.0) and float(r[1]) == pytest.approx(0.0, abs=1e-15) for r in rows)
    code, out, _ = run(capsys, "range", "--weight", files("I.json", np.eye(2)), "--matrix",
                       files("J.json", J), "--out", str(csv), "--n-boundary", "720")
    assert float(out.split()[1]) == pytest.approx(0.5, abs=1e-5)


def test_index_command(capsys, files):
    code, out, _ = run(capsys, "index", "--weight", files("I.json", np.eye(2)))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "half" and rep["witness"] is not None
    code, out, _ = run(capsys, "index", "--weight", files("D.json", np.diag([1.0, 0.0])),
                       "--subalgebra", "lower-triangular", "--budget", "30")
    assert json.loads(out)["verdict"] == "one"
    code, out, _ = run(capsys, "index", "--weight", files("I3.json", np.eye(3)),
                       "--subalgebra", "commutative-diagonal", "--budget", "30")
    assert json.loads(out)["verdict"] == "one"


def test_verify_and_config_override(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('seed = 3\n[verify]\ntrials = 2\ncheckers = ["eq-1-2", "power"]\ndims = [2]\n')
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--out", str(tmp_path / "a.json"))
    assert code == 0 and "total failures: 0" in out
    rep = json.loads((tmp_path / "a.json").read_text())
    assert set(rep) == {"eq-1-2", "power"} and rep["power"]["trials"] == 2
    code, _, _ = run(capsys, "verify", "--config", str(cfg), "--trials", "4", "--out", str(tmp_path / "b.json"))
    assert json.loads((tmp_path / "b.json").read_text())["power"]["trials"] == 4
    run(capsys, "verify", "--config", str(cfg), "--out", str(tmp_path / "c.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "c.json").read_bytes()


def test_verify_tight_tolerance_exits_one(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--checkers", "lem-4-2,thm-2-5", "--trials", "20", "--dims", "3",
                       "--tol", "1e-16", "--out", str(tmp_path / "f.json"))
    assert code == 1
    rep = json.loads((tmp_path / "f.json").read_text())
    fails = rep["lem-4-2"]["failures"] + rep["thm-2-5"]["failures"]
    assert fails and {"seed", "weight", "inputs", "chain"} <= set(fails[0])


def test_search_commands(capsys):
    code, out, _ = run(capsys, "search", "tightness", "--checker", "eq-1-2", "--ensemble", "nilpotent-ax2-zero",
                       "--dim", "3", "--budget", "10")
    rep = json.loads(out)
    assert code == 0 and rep["ratio"] == pytest.approx(1.0, abs=1e-8)
    x = matrix_from_dict(rep["inputs"]["x"])
    A = matrix_from_dict(rep["weight"])
    assert np.linalg.norm(A @ x @ x, 2) <= 1e-10 * (1 + np.linalg.norm(x, 2) ** 2)
    code, out, _ = run(capsys, "search", "kappa", "--ensemble", "commutative-diagonal", "--dim", "3", "--budget", "40")
    assert code == 0 and json.loads(out)["sup_ratio"] <= 1 + 1e-6


def test_save_and_load(tmp_path):
    M = np.array([[1 + 2j, -0.1], [1e-300, 3.5j]])
    save_matrix(M, tmp_path / "m.json")
    assert np.array_equal(load_matrix(tmp_path / "m.json"), M)
