import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from carnot_cut.cli import dumps_json, main
from carnot_cut.scalars import P_inv, Q_inv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def strip_time(text):
    rec = json.loads(text)
    rec.pop("timestamp")
    return rec


def test_dist_center(capsys):
    rec = run_json(capsys, "dist", "0", "0", "0", "0", "0", "0.0795775")
    assert rec["schema_version"] == 1 and rec["command"] == "dist"
    assert rec["result"]["method"] == "formula"
    assert rec["result"]["distance"] == pytest.approx(1.0, abs=1e-6)
    assert "timestamp" in rec


def test_dist_straight_line_uses_shooting(capsys):
    rec = run_json(capsys, "dist", "1", "0", "0", "0", "0", "0")
    assert rec["result"]["method"] == "shooting"
    assert rec["result"]["distance"] == pytest.approx(1.0, abs=1e-8)
    assert rec["result"]["residual"] <= 1e-11


def test_dist_formula_branch_theta(capsys):
    rec = run_json(capsys, "dist", "0", "0", "1", "1", "0", "0", "--model", "wedge")
    assert rec["result"]["method"] == "formula"
    assert rec["result"]["theta"] == pytest.approx(P_inv(1.0), abs=1e-12)
    assert rec["result"]["on_cut_locus"] is True


def test_dist_cross_model_matches_wedge(capsys):
    # wedge t = e1^e2 is cross t = e3
    a = run_json(capsys, "dist", "0", "0", "1", "1", "0", "0")
    b = run_json(capsys, "dist", "0", "0", "1", "0", "0", "1", "--model", "cross")
    assert a["result"]["distance"] == b["result"]["distance"]


def test_dist_methods_agree_on_cut_locus(capsys):
    a = run_json(capsys, "dist", "0", "0", "1", "1", "0", "0", "--method", "formula")
    b = run_json(capsys, "dist", "0", "0", "1", "1", "0", "0", "--method", "shooting")
    assert a["result"]["distance"] == pytest.approx(b["result"]["distance"], abs=1e-6)


def test_dist_errors(capsys):
    assert run(capsys, "dist", "0", "0", "0", "0", "0", "0")[0] == 2
    assert run(capsys, "dist", "1", "0", "0", "0", "0", "0", "--method", "formula")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["dist", "1", "2"])
    assert exc.value.code == 2


def test_shooting_failure_exit_code(capsys):
    code, _, err = run(capsys, "dist", "0.3", "0.2", "0.1", "0.1", "-0.4", "0.2", "--tol", "1e-300")
    assert code == 3
    assert "error" in err


def test_cut_time_examples(capsys):
    rec = run_json(capsys, "cut-time", "1", "0", "0", "0", "1", "0", "0", "0", "0", "2")
    assert rec["result"]["t_cut"] == pytest.approx(math.pi / 2, rel=1e-14)
    assert rec["result"]["theta"] == pytest.approx(math.pi)
    rec = run_json(capsys, "cut-time", "1", "0", "0", "0", "1", "0", "0", "0", "1", "1")
    assert rec["result"]["t_cut"] == pytest.approx(Q_inv(1.0), abs=1e-12)
    rec = run_json(capsys, "cut-time", "0", "0", "0", "0", "0", "0", "0", "0", "1", "0")
    assert rec["result"]["t_cut"] == "infinite"


def test_cut_time_inadmissible(capsys):
    code, _, err = run(capsys, "cut-time", "1", "0", "0", "1", "0", "0", "0", "0", "1", "1")
    assert code == 2
    assert "<a,b>" in err


def test_geodesic_rows(capsys):
    rec = run_json(capsys, "geodesic", "1", "0", "0", "0", "1", "0", "0", "0", "0", "3.141592653589793",
                   "--n-samples", "11")
    rows, cols = rec["result"]["rows"], rec["result"]["columns"]
    assert len(rows) == 11
    assert cols[:7] == ["s", "x1", "x2", "x3", "t12", "t13", "t23"]
    s = [r[0] for r in rows]
    assert s == sorted(s)
    assert np.allclose(rows[-1][1:4], 0.0, atol=1e-15)
    assert rows[-1][4] == pytest.approx(1 / (4 * math.pi))


def test_geodesic_constant_rows_and_errors(capsys):
    rec = run_json(capsys, "geodesic", "1", "0", "0", "0", "1", "0", "0", "0", "1", "1",
                   "--n-samples", "3", "--s-max", "0")
    rows = rec["result"]["rows"]
    assert len(rows) == 3 and all(r[1:7] == [0.0] * 6 for r in rows)
    assert run(capsys, "geodesic", *["1", "0", "0", "0", "1", "0", "0", "0", "1", "1"], "--n-samples", "1")[0] == 2


def test_geodesic_csv(capsys):
    code, out, _ = run(capsys, "geodesic", "1", "0", "0", "0", "1", "0", "0", "0", "1", "1",
                       "--n-samples", "5", "--s-max", "6", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "s" and rows[0][-1] == "is_past_cut"
    assert len(rows) == 6
    assert rows[1][-1] == "false" and rows[-1][-1] == "true"
    float(rows[2][1])


def test_sphere_contains_center_cap(capsys):
    rec = run_json(capsys, "sphere", "1", "--n-theta", "3", "--n-mu", "1", "--n-angles", "1")
    rows = rec["result"]["rows"]
    assert rec["result"]["count"] == len(rows) == 6
    caps = [r for r in rows if r[-1] and r[-2] == 0.0]
    assert caps and np.allclose(caps[0][:3], 0.0, atol=1e-15)
    assert np.linalg.norm(caps[0][3:6]) == pytest.approx(1 / (4 * math.pi))


def test_sphere_scaling(capsys):
    a = run_json(capsys, "sphere", "1", "--n-theta", "3", "--n-mu", "2", "--n-angles", "1")["result"]["rows"]
    b = run_json(capsys, "sphere", "2", "--n-theta", "3", "--n-mu", "2", "--n-angles", "1")["result"]["rows"]
    for ra, rb in zip(a, b):
        assert np.allclose(rb[:3], 2 * np.array(ra[:3]))
        assert np.allclose(rb[3:6], 4 * np.array(ra[3:6]))


def test_sphere_rows_have_distance_r(capsys):
    from carnot_cut.algebra import GroupPoint
    from carnot_cut.solver import distance
    rows = run_json(capsys, "sphere", "1.5", "--n-theta", "4", "--n-mu", "2", "--n-angles", "1")["result"]["rows"]
    for r in rows[::4]:
        p = GroupPoint(r[:3], r[3:6])
        assert distance(p).distance == pytest.approx(1.5, abs=1e-5)


def test_sphere_errors(capsys):
    assert run(capsys, "sphere", "0")[0] == 2
    assert run(capsys, "sphere", "1", "--n-theta", "1")[0] == 2


def test_verify_suites(capsys):
    rec = run_json(capsys, "verify", "scalars")
    assert rec["result"]["passed"] is True
    assert [c["criterion"] for c in rec["result"]["criteria"]] == [3, 8]
    a = run(capsys, "verify", "oracle", "--seed", "7")
    b = run(capsys, "verify", "oracle", "--seed", "7")
    assert a[0] == b[0] == 0
    assert strip_time(a[1]) == strip_time(b[1])
    assert run(capsys, "verify", "nope")[0] == 2


def test_verify_corner_reports_slopes(capsys):
    code, out, _ = run(capsys, "verify", "corner")
    rec = json.loads(out)
    corner = [c for c in rec["result"]["criteria"] if c["criterion"] == 9][0]
    assert any("slope" in k for k in corner["metrics"])
    assert code == (0 if rec["result"]["passed"] else 1)


def test_output_is_deterministic(capsys):
    args = ["dist", "0.3", "-0.2", "0.5", "0.1", "0.05", "-0.2", "--seed", "3"]
    a, b = run(capsys, *args)[1], run(capsys, *args)[1]
    assert strip_time(a) == strip_time(b)
    body = lambda t: "\n".join(l for l in t.splitlines() if "timestamp" not in l)
    assert body(a) == body(b)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "d.json"
    code, out, _ = run(capsys, "dist", "1", "0", "0", "0", "0", "0", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"]["distance"] == pytest.approx(1.0, abs=1e-8)
    assert run(capsys, "dist", "1", "0", "0", "0", "0", "0", "--out", str(tmp_path / "no" / "x.json"))[0] == 2


def test_json_floats_round_trip():
    vals = [0.1, 1 / 3, math.pi, 1e-300, 123456789.123456789]
    text = dumps_json({"v": vals})
    assert json.loads(text)["v"] == vals


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "carnot_cut", "dist", "0", "0", "0", "0", "0", "1",
                           "--format", "csv"], capture_output=True, text=True, check=True)
    rows = list(csv.reader(io.StringIO(proc.stdout)))
    d = float(rows[1][rows[0].index("distance")])
    assert d == pytest.approx(math.sqrt(4 * math.pi), rel=1e-14)
