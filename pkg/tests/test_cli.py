import csv
import io
import json

import numpy as np
import pytest

from orfq.cli import main


@pytest.fixture
def files(tmp_path):
    poles = tmp_path / "poles.json"
    poles.write_text(json.dumps({"gamma0": "0", "poles": [0.3, "inf", {"re": 0, "im": -0.4}, 1.8, {"re": 0, "im": 0.1}]}))
    alphas = tmp_path / "alphas.json"
    alphas.write_text(json.dumps({"alphas": [0.3, 0, "-0.4j", 1 / 1.8, "0.1j"], "side": "ABABA"}))
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"alphas": [0, 0, 0, 0]}))
    meas = tmp_path / "mu.json"
    meas.write_text(json.dumps({"type": "random_discrete", "seed": 3, "N": 40}))
    return {"poles": str(poles), "alphas": str(alphas), "zero": str(zero), "mu": str(meas), "dir": tmp_path}


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lebesgue_quadrature_csv(capsys, files):
    code, out, _ = run(capsys, "quad", "--poles", files["zero"], "--n", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO("\n".join(l for l in out.splitlines() if not l.startswith("#")))))
    nodes = np.array([complex(float(r["node_re"]), float(r["node_im"])) for r in rows])
    assert np.max(np.abs(nodes ** 4 + 1)) < 1e-12
    assert all(abs(float(r["weight"]) - 0.25) < 1e-12 for r in rows)


def test_output_is_deterministic(capsys, files):
    a = run(capsys, "quad", "--poles", files["poles"], "--measure", files["mu"], "--n", "5", "--tau-turns", "0.2")
    b = run(capsys, "quad", "--poles", files["poles"], "--measure", files["mu"], "--n", "5", "--tau-turns", "0.2")
    assert a == b and a[0] == 0


def test_pole_formats_agree(capsys, files):
    a = run(capsys, "orf", "--poles", files["poles"], "--measure", files["mu"], "--n", "5")
    b = run(capsys, "orf", "--poles", files["alphas"], "--measure", files["mu"], "--n", "5")
    assert a[0] == b[0] == 0
    ra, rb = json.loads(a[1])["rows"], json.loads(b[1])["rows"]
    assert len(ra) == len(rb) == 6
    assert json.loads(a[1])["orthonormality_error"] < 1e-10


def test_orf_csv_columns(capsys, files):
    code, out, _ = run(capsys, "orf", "--poles", files["zero"], "--n", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert all(abs(float(r["lambda_re"])) < 1e-12 and abs(float(r["lambda_im"])) < 1e-12 for r in rows[1:])
    code, out, _ = run(capsys, "orf", "--poles", files["poles"], "--n", "5", "--kind", "G", "--out", "csv")
    assert [r["side"] for r in csv.DictReader(io.StringIO(out))][1:] == list("ABABA")


def test_emit_params(capsys, files):
    code, out, _ = run(capsys, "orf", "--poles", files["poles"], "--measure", files["mu"], "--n", "3",
                       "--emit-params")
    assert code == 0 and len(json.loads(out)["params"]["lambdas"]) == 3


def test_quad_both_routes(capsys, files):
    code, out, _ = run(capsys, "quad", "--poles", files["poles"], "--measure", files["mu"], "--n", "5",
                       "--route", "both", "--format", "json")
    assert code == 0
    code, _, _ = run(capsys, "quad", "--poles", files["poles"], "--measure", files["mu"], "--n", "5",
                     "--route", "both", "--tol", "1e-300")
    assert code == 4


def test_out_file(capsys, files):
    target = files["dir"] / "q.json"
    code, out, _ = run(capsys, "quad", "--poles", files["zero"], "--n", "3", "--format", "json", "--out", str(target))
    assert code == 0 and target.exists() and json.loads(target.read_text())


def test_matrix_outputs(capsys, files):
    for emit in ("factors", "dense", "pattern"):
        code, out, _ = run(capsys, "matrix", "--poles", files["poles"], "--measure", files["mu"], "--n", "3",
                           "--emit", emit)
        assert code == 0 and out.strip()


def test_ampd(capsys):
    code, out, _ = run(capsys, "ampd", "--n", "5", "--exhaustive")
    assert code == 0 and json.loads(out)["max_det_dev"] < 1e-9
    code, out, _ = run(capsys, "ampd", "--n", "6", "--unitary", "--samples", "8")
    assert code == 0


def test_spec_errors(capsys, files):
    assert run(capsys, "orf", "--n", "3")[0] == 2
    bad = files["dir"] / "bad.json"
    bad.write_text("{")
    assert run(capsys, "orf", "--poles", str(bad), "--n", "3")[0] == 2
    circle = files["dir"] / "circle.json"
    circle.write_text(json.dumps({"poles": [1.0]}))
    assert run(capsys, "orf", "--poles", str(circle), "--n", "1")[0] == 2
    assert run(capsys, "quad", "--poles", files["zero"], "--n", "9")[0] == 2


def test_numerical_error_exit(capsys):
    code, _, err = run(capsys, "roots", "--coeffs", "[1, 0]")
    assert code == 3 and "DegenerateLeading" in err


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "--coeffs", "[-1, 0, 1]")
    r = sorted(c["re"] for c in json.loads(out)["roots"])
    assert code == 0 and np.allclose(r, [-1, 1])


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    data = json.loads(out)
    assert code == 0
    groups = data["groups"] if isinstance(data, dict) else data
    assert len(groups) >= 12
    assert run(capsys, "verify", "--perturb")[0] == 1
