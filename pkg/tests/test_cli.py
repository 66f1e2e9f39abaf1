import csv
import json
import math
import os
import pytest
import graftlab
from graftlab.cli import main

def read_json(path):
    with open(path) as f:
        return json.load(f)


def read_csv(path):
    with open(path) as f:
        return list(csv.DictReader(f))


@pytest.fixture(autouse=True)
def two_threads(monkeypatch):
    monkeypatch.setenv("GRAFTLAB_THREADS", "2")


def test_no_command_is_usage_error(capsys):
    assert main([]) == 2
    assert main(["verify", "--modes", "many"]) == 2
    assert main(["--help"]) == 0


def test_chart(tmp_path):
    out = tmp_path / "chart.json"
    assert main(["chart", "--ell", "4", "--s", "1", "--out", str(out)]) == 0
    values = read_json(out)
    assert values["chart"] == {"ell": 4.0, "s": 1.0, "a": 1.0, "outer_bc": "dirichlet"}
    assert values["x_max"] == 1.5
    assert values["seams"] == [-0.5, 0.5]
    assert values["conformal_modulus"] > 0
    assert graftlab.get_chart(str(out)) == graftlab.GraftedCollar(4.0, 1.0, 1.0)


def test_verify_passes(tmp_path):
    out = tmp_path / "report.json"
    log = tmp_path / "run.log"
    assert main(["verify", "--modes", "4", "--out", str(out), "--log", str(log)]) == 0
    reports = read_json(out)
    assert len(reports) >= 12
    assert all(report["pass"] for report in reports)
    with open(log) as f:
        assert "identities passed" in f.read()


def test_verify_is_deterministic(tmp_path):
    outputs = []
    for name in ("first.json", "second.json"):
        out = tmp_path / name
        assert main(["verify", "--modes", "4", "--seed", "3", "--out", str(out)]) == 0
        reports = read_json(out)
        for report in reports:
            report.pop("timestamp")
        outputs.append(reports)
    assert outputs[0] == outputs[1]


def test_verify_fails_at_impossible_tolerance(tmp_path):
    assert main(["verify", "--modes", "4", "--tol", "1e-16", "--out", str(tmp_path / "r.json")]) == 1


def test_bad_configurations(tmp_path):
    malformed = tmp_path / "malformed.cfg"
    malformed.write_text("ell 3\n")
    assert main(["chart", "--config", str(malformed)]) == 2
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("length = 3\n")
    assert main(["chart", "--config", str(unknown)]) == 2
    assert main(["chart", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert main(["chart", "--ell", "-1"]) == 2


def test_configuration_file_and_flags(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("ell = 3.0\ns = 0.5  # short graft\n")
    out = tmp_path / "chart.json"
    assert main(["chart", "--config", str(config), "--s", "0.25", "--out", str(out)]) == 0
    assert read_json(out)["chart"]["ell"] == 3.0
    assert read_json(out)["chart"]["s"] == 0.25


def test_unwritable_output(tmp_path):
    assert main(["chart", "--out", str(tmp_path / "missing" / "chart.json")]) == 2


def test_sweep_over_length(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--param", "ell", "--from", "1", "--to", "8", "--steps", "10", "--modes", "4",
     "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [int(row["index"]) for row in rows] == list(range(10))
    moduli = [float(row["modulus"]) for row in rows]
    assert all(a > b for a, b in zip(moduli, moduli[1:]))
    assert all(float(row["det_%i" % n]) < 0 for row in rows for n in range(1, 5))
    assert all(float(row["boundary_residual"]) < 1e-10 for row in rows)
    assert all(float(row["slice_residual"]) < 1e-12 for row in rows)


def test_sweep_over_height(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--param", "s", "--from", "0", "--to", "4", "--steps", "5", "--modes", "4",
     "--out", str(out)]) == 0
    moduli = [float(row["modulus"]) for row in read_csv(out)]
    assert all(a < b for a, b in zip(moduli, moduli[1:]))
    assert all(float(row["zero_mode_coefficient"]) > 0 for row in read_csv(out))


def test_single_step_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--param", "a", "--from", "2", "--to", "3", "--steps", "1", "--modes", "2",
     "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["a"]) == 2.0


def test_sweep_needs_a_range():
    assert main(["sweep", "--modes", "2"]) == 2


def test_geodesic(tmp_path):
    out = tmp_path / "geodesic.json"
    assert main(["geodesic", "--out", str(out)]) == 0
    report = read_json(out)
    assert report["pass"]
    assert set(report["sides"]) == {"left", "right"}
    assert report["sides"]["left"]["t"]["t"] == 1e-3


def test_modes(tmp_path):
    out = tmp_path / "modes"
    assert main(["modes", "--modes", "3", "--nodes", "64", "--out", str(out)]) == 0
    names = sorted(os.listdir(out))
    assert names == ["solution.json", "strip_mode_000.csv", "strip_mode_001.csv", "strip_mode_002.csv",
     "strip_mode_003.csv", "traces.json"]
    assert [mode["n"] for mode in read_json(out / "solution.json")["modes"]] == [1, 2, 3]
    assert set(read_json(out / "traces.json")) == {"left", "right"}


def test_sweep_on_steep_charts_has_finite_determinants(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--param", "ell", "--from", "1", "--to", "1.5", "--steps", "5", "--s", "4",
     "--modes", "32", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 5
    for row in rows:
        determinants = [float(row["det_%i" % n]) for n in range(1, 33)]
        assert all(math.isfinite(value) and value < 0 for value in determinants)
        assert 1e-6 < float(row["min_abs_det"]) < math.inf


def test_strip_commands_need_positive_width(tmp_path):
    out = str(tmp_path / "out")
    assert main(["verify", "--a", "0", "--modes", "2", "--out", out]) == 2
    assert main(["modes", "--a", "0", "--modes", "2", "--out", out]) == 2
    assert main(["sweep", "--param", "a", "--from", "0", "--to", "1", "--steps", "3", "--modes", "2",
     "--out", out]) == 2
    assert main(["chart", "--a", "0", "--out", str(tmp_path / "chart.json")]) == 0
