import json

import pytest

from app.base import ConfigError
from app.utils import (
    REPORT_COLUMNS,
    BoundReport,
    ComplexMatrix,
    PolySpan,
    load_run_config,
    serialize_matrix,
    write_json,
)
from app.workers import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_VIOLATION,
    SUITE_TABLE,
    execute,
)
from app.workers.suites import ei_reports, partition_of_unity_report, tau_constant_report
from rittcalc import grid_size, main


@pytest.fixture()
def identity_file(tmp_path):
    path = tmp_path / "identity.json"
    path.write_text(serialize_matrix(ComplexMatrix.identity(2)), encoding="utf-8")
    return str(path)


@pytest.fixture()
def diag_file(tmp_path, diag_example):
    path = tmp_path / "diag.json"
    path.write_text(serialize_matrix(diag_example), encoding="utf-8")
    return str(path)


@pytest.fixture()
def poly_file(tmp_path):
    path = str(tmp_path / "p.json")
    write_json(PolySpan(0, [1.0, -0.5, 0.25j]).to_json_data(), path)
    return path


@pytest.mark.parametrize(
    "kwargs",
    [
        {"command": "nonsense"},
        {"command": "analyze"},
        {"command": "fcalc", "inputs": ["t.json"]},
        {"command": "verify", "suite": "thm9"},
        {"command": "sweep"},
        {"command": "verify", "suite": "thm2", "grid": 32},
        {"command": "verify", "suite": "thm2", "tol": 0.0},
        {"command": "verify", "suite": "thm2", "s": 1.0},
        {"command": "verify", "suite": "thm2", "format": "xml"},
        {"command": "verify", "suite": "thm2", "colour": "red"},
    ],
)
def test_bad_run_config(kwargs):
    with pytest.raises(ConfigError):
        load_run_config(**kwargs)


def test_run_config_defaults():
    cfg = load_run_config(command="sweep", kind="ctm")
    assert cfg.report_format() == "csv"
    assert load_run_config(command="verify", suite="all").report_format() == "json"
    assert cfg.numeric_overrides() == {"grid": None, "quad_tol": None, "n_max": None, "seed": 0}


def test_analyze(tmp_path, identity_file):
    out = str(tmp_path / "profile.json")
    cfg = load_run_config(
        command="analyze", inputs=[identity_file], grid=64, n_max=500, out=out
    )
    assert execute(cfg) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        profile = json.load(f)
    assert profile["c_tr"] == pytest.approx(1.0, abs=1e-6)
    assert profile["pb"] == pytest.approx(1.0)
    assert profile["grid_size"] == 64


def test_fcalc(tmp_path, diag_file, poly_file):
    out = str(tmp_path / "pT.json")
    cfg = load_run_config(command="fcalc", inputs=[diag_file], poly=poly_file, grid=64, out=out)
    assert execute(cfg) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        data = json.load(f)
    assert data["dim"] == 2
    assert data["diagnostics"]["oracle_error"] <= 1e-7


def test_besov(tmp_path, diag_file, poly_file):
    out = str(tmp_path / "pT.json")
    cfg = load_run_config(command="besov", inputs=[diag_file], poly=poly_file, grid=64, out=out)
    assert execute(cfg) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        data = json.load(f)
    assert data["report"]["pass"] is True
    assert "c_tr" in data["profile"]


def test_unreadable_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2,', encoding="utf-8")
    cfg = load_run_config(command="analyze", inputs=[str(bad)], out=str(tmp_path / "x.json"))
    assert execute(cfg) == EXIT_CONFIG


def test_spectrum_outside_disc(tmp_path):
    path = tmp_path / "big.json"
    path.write_text(serialize_matrix(ComplexMatrix.diagonal([1.5])), encoding="utf-8")
    cfg = load_run_config(command="analyze", inputs=[str(path)], out=str(tmp_path / "x.json"))
    assert execute(cfg) == EXIT_NUMERIC


def test_violation_exit_code(tmp_path, monkeypatch):
    monkeypatch.setitem(
        SUITE_TABLE, "bernstein", lambda cfg, ops: [BoundReport("broken", 2.0, 1.0)]
    )
    out = str(tmp_path / "r.json")
    cfg = load_run_config(command="verify", suite="bernstein", out=out)
    assert execute(cfg) == EXIT_VIOLATION
    with open(out, encoding="utf-8") as f:
        assert json.load(f)["reports"][0]["pass"] is False


def test_cli_verify(tmp_path):
    first, second = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    for out in (first, second):
        args = ["verify", "bernstein", "--samples", "2", "--format", "csv", "--out", out]
        assert main(args) == EXIT_OK
    with open(first, encoding="utf-8") as f:
        text = f.read()
    with open(second, encoding="utf-8") as f:
        assert f.read() == text
    assert text.split("\n", 1)[0] == ",".join(REPORT_COLUMNS)


def test_cli_bad_flag(tmp_path):
    assert main(["verify", "thm2", "--grid", "8", "--out", str(tmp_path / "x")]) == EXIT_CONFIG


def test_partition_of_unity_report():
    report = partition_of_unity_report(1024)
    assert report.lhs == 0.0
    assert report.passed


def test_ei_and_tau_reports():
    reports = ei_reports(points=50)
    assert {r.name for r in reports} == {
        "ei_lower",
        "ei_upper",
        "ei_log",
        "ei_decreasing",
        "ei_log_convex",
    }
    assert all(r.passed for r in reports)
    assert tau_constant_report().passed


@pytest.mark.parametrize("suite", sorted(SUITE_TABLE))
def test_every_suite_passes(tmp_path, suite):
    out = str(tmp_path / f"{suite}.csv")
    args = ["verify", suite, "--samples", "4", "--budget", "16", "--format", "csv", "--out", out]
    assert main(args) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        rows = f.read().strip().split("\n")
    assert rows[0] == ",".join(REPORT_COLUMNS)
    assert len(rows) > 1


def test_cli_default_grid(tmp_path):
    out = str(tmp_path / "r.json")
    assert main(["verify", "bernstein", "--grid", "default", "--samples", "2", "--out", out]) == 0
    assert grid_size("default") is None
    assert grid_size("128") == 128
    with pytest.raises(SystemExit):
        main(["verify", "bernstein", "--grid", "fine", "--out", out])
