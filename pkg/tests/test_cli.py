import csv
import io
import json

import pytest

from gkcp2 import cli, gkp


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_csv(capsys):
    code, out, _ = run(capsys, "params", "--c3", str(1 / 54))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["legendre_residual"]) < 1e-12
    assert float(rows[0]["g2"]) == pytest.approx(1 / 12 - 2 / 54)


def test_params_limits(capsys):
    _, out, _ = run(capsys, "params", "--c3", "0.037036", "--format", "json")
    doc = json.loads(out)
    assert doc["omega1"] == pytest.approx(3 ** 0.5 * 3.141592653589793, rel=1e-2)
    assert doc["errors"] == []
    _, out, _ = run(capsys, "params", "--c3", "1e-6", "--format", "json")
    assert json.loads(out)["omega2_imag"] == pytest.approx(3.141592653589793, rel=1e-4)


@pytest.mark.parametrize(
    "argv, code",
    [
        (["params"], 2),
        (["params", "--c3", "0.5"], 3),
        (["params", "--c3", "0"], 3),
        (["nonsense"], 2),
        (["field"], 2),
        (["field", "--kind", "g", "--grid-c3", "1"], 2),
        (["contour", "--c3", "0.02", "--n", "1"], 2),
        (["check", "--tol", "GKS_I"], 2),
        (["check", "--tol", "GKS_I=-1"], 2),
        (["gkp", "--c3", "0.02", "--dt", "-1"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_contour_rows(capsys):
    _, out, _ = run(capsys, "contour", "--c3", "0.02", "--n", "4")
    rows = [list(map(float, r)) for r in list(csv.reader(io.StringIO(out)))[1:]]
    assert len(rows) == 4
    assert rows[0][1] == pytest.approx(rows[0][2], abs=1e-13)
    assert rows[1][0] - rows[0][0] == pytest.approx(rows[2][0] - rows[1][0])
    for _, y1, y2, y3 in rows:
        assert abs(y1 + y2 + y3 - 1) < 1e-10 and abs(y1 * y2 * y3 - 0.02) < 1e-10
        assert min(y1, y2, y3) > 0
    assert rows[1][2] < rows[0][2]


def test_field_columns(capsys):
    _, out, _ = run(capsys, "field", "--kind", "I_minus", "--grid-c3", "2", "--grid-s", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    assert all(float(r["m00"]) == 0.0 for r in rows)
    _, out, _ = run(capsys, "field", "--kind", "F", "--dt", "0")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(float(r[f"m{i}{j}"]) == 0.0 for r in rows for i in range(4) for j in range(4))


def test_field_metric_positive(capsys):
    _, out, _ = run(capsys, "field", "--kind", "g", "--dt", "0.05", "--format", "json")
    doc = json.loads(out)
    assert doc["errors"] == []
    assert all(x["min_eig"] > 0 for x in doc["samples"])


def test_csv_is_deterministic_and_round_trips(capsys, tmp_path):
    path = tmp_path / "f.csv"
    argv = ["field", "--kind", "I_plus", "--dt", "0.3", "--grid-c3", "3", "--grid-s", "2"]
    run(capsys, *argv, "--out", str(path))
    first = path.read_bytes()
    run(capsys, *argv, "--out", str(path))
    assert path.read_bytes() == first
    assert b"\r\n" not in first
    _, out, _ = run(capsys, *argv)
    assert out.encode() == first


def test_check_suite_exit_matches_report(capsys):
    code, out, _ = run(capsys, "check", "--suite", "elliptic")
    assert code == 0 and "== elliptic: PASS" in out
    code, out, _ = run(capsys, "check", "--suite", "area", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert "area" in doc["reports"][0]["items"][0]["anchor"]


def test_check_tolerance_override(capsys):
    code, _, _ = run(capsys, "check", "--suite", "area", "--tol", "triangle_area=1e-30")
    assert code == 1


def test_check_is_deterministic(capsys):
    a = run(capsys, "check", "--suite", "groupoid", "--seed", "5", "--format", "csv")[1]
    b = run(capsys, "check", "--suite", "groupoid", "--seed", "5", "--format", "csv")[1]
    assert a == b


def test_gkp_json(capsys):
    code, out, _ = run(capsys, "gkp", "--c3", "0.02", "--s", "1.0", "--dt", "0.5", "--slope")
    doc = json.loads(out)
    assert code == 0
    assert doc["K"] == pytest.approx(doc["fubini_study_part"] + doc["correction_part"], abs=1e-15)
    assert doc["slope_residual"] < 1e-6
    _, out, _ = run(capsys, "gkp", "--c3", "0.02", "--dt", "0")
    doc = json.loads(out)
    assert doc["K"] == doc["fubini_study_part"] == doc["correction_part"] == 0.0


def test_gkp_quadrature_failure_exit(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise gkp.QuadratureError("forced")

    monkeypatch.setattr(gkp, "integrate_doubling", fail)
    assert run(capsys, "gkp", "--c3", "0.02", "--dt", "0.5")[0] == 4


def test_json_has_no_nan():
    text = cli.dump_json({"a": float("nan"), "b": [1.0, float("inf")]})
    doc = json.loads(text)
    assert doc["a"] is None and doc["b"][1] is None
    assert len(doc["errors"]) == 2
