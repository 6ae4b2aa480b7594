

import numpy as np
import pytest

from narxiv.cli import main
from narxiv.fixtures import fixture_path
from narxiv.model import Dataset, free_run, read_dataset_csv, read_model_file, write_dataset_csv
from narxiv.signals import prbs


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def linear_csvs(tmp_path):
    """Estimation and validation records of y = 0.5 y(k-1) + 0.3 u(k-1)."""
    paths = {}
    for split, seed in (("est", 3), ("val", 11)):
        u = prbs(400, register_bits=9, seed=seed)
        y = np.zeros(400)
        for k in range(1, 400):
            y[k] = 0.5 * y[k - 1] + 0.3 * u[k - 1]
        path = tmp_path / f"{split}.csv"
        write_dataset_csv(path, Dataset(u, y, name=f"linear-{split}"))
        paths[split] = path
    return paths


def test_generate_duffing(tmp_path, capsys):
    out = tmp_path / "duffing.csv"
    assert run("generate", "duffing", "--periods", 3, "--transient", 1, "--out", out) == 0
    data = read_dataset_csv(out)
    assert len(data) == 60
    assert (tmp_path / "duffing.csv.manifest").exists()


def test_generate_prbs_and_seed_env(tmp_path, monkeypatch):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    monkeypatch.setenv("NARXIV_SEED", "9")
    assert run("generate", "prbs", "--length", 50, "--out", out1) == 0
    monkeypatch.delenv("NARXIV_SEED")
    assert run("generate", "prbs", "--length", 50, "--seed", 9, "--out", out2) == 0
    a = read_dataset_csv(out1)
    b = read_dataset_csv(out2)
    assert np.array_equal(a.u, b.u)
    assert np.all(a.y == 0.0)  # excitation-only record


def test_full_linear_pipeline(tmp_path, linear_csvs):
    sel = tmp_path / "sel"
    est = tmp_path / "est"
    val = tmp_path / "val"
    assert run(
        "select", "--data", linear_csvs["est"], "--l", 2, "--ny", 2, "--nu", 2,
        "--d", 1, "--max-terms", 8, "--out", sel,
    ) == 0
    structure, coefficients = read_model_file(sel / "structure.model")
    assert coefficients is None
    assert len(structure) == 2

    assert run(
        "estimate", "--data", linear_csvs["est"], "--structure", sel / "structure.model",
        "--out", est,
    ) == 0
    _, estimated = read_model_file(est / "model.model")
    assert estimated is not None
    point_lines = (est / "params_point.csv").read_text().splitlines()
    assert point_lines[0] == "term,value"
    assert len(point_lines) == 3

    assert run(
        "validate", "--data", linear_csvs["val"], "--model", est / "model.model",
        "--mode", "osa", "--out", val,
    ) == 0
    summary = (val / "rmse_summary.csv").read_text().splitlines()
    assert summary[0].startswith("case,mode,interval,rmse")
    rmse = float(summary[1].split(",")[3])
    assert rmse < 1e-6  # noise-free surrogate

    predictions = (val / "predictions.csv").read_text().splitlines()
    assert predictions[0] == "k,y,yhat"
    assert len(predictions) == 400 - structure.max_lag + 1


def test_validate_interval_and_report(tmp_path, linear_csvs):
    sel, est = tmp_path / "sel", tmp_path / "est"
    run("select", "--data", linear_csvs["est"], "--l", 1, "--ny", 1, "--nu", 1,
        "--d", 1, "--out", sel)
    run("estimate", "--data", linear_csvs["est"], "--structure", sel / "structure.model",
        "--out", est)
    for mode, flag, sub in (("osa", [], "po"), ("osa", ["--interval"], "io"),
                            ("free-run", [], "pf")):
        assert run(
            "validate", "--data", linear_csvs["val"], "--model", est / "model.model",
            "--mode", mode, *flag, "--out", tmp_path / sub,
        ) == 0
    interval_summary = (tmp_path / "io" / "rmse_summary.csv").read_text().splitlines()[1]
    parts = interval_summary.split(",")
    assert parts[1] == "osa" and parts[2] == "1"
    assert float(parts[4]) <= float(parts[5])

    table = tmp_path / "table.csv"
    assert run("report", "--runs", tmp_path, "--out", table) == 0
    lines = table.read_text().splitlines()
    assert lines[0] == "case,rmse_free_run,rmse_osa,rmse_interval_lo,rmse_interval_hi"
    row = lines[1].split(",")
    assert row[0] == "val"  # dataset CSVs carry no name; the file stem is the case
    assert all(cell for cell in row[1:])


def test_validate_free_run_interval_cap_diagnostic(tmp_path, linear_csvs, capsys):
    # an expansive coefficient interval makes free-run widths blow up; the
    # cap must surface as a diagnostic row, not a crash
    model_path = tmp_path / "expansive.model"
    model_path.write_text(
        "n_y=1\nn_u=1\nd=1\nl=1\ny(k-1) : 1.4:1.6\nu(k-1) : 0.29:0.31\n"
    )
    out = tmp_path / "fr"
    assert run(
        "validate", "--data", linear_csvs["val"], "--model", model_path,
        "--mode", "free-run", "--interval", "--width-cap", "0.5", "--out", out,
    ) == 0
    summary = (out / "rmse_summary.csv").read_text().splitlines()[1].split(",")
    assert summary[6] != ""  # diverged_at_step recorded
    captured = capsys.readouterr()
    assert "width cap" in captured.out


def test_validate_on_bundled_fixture(tmp_path):
    structure, coefficients = read_model_file(fixture_path("rlc_series"))
    u = prbs(300, register_bits=9, seed=5, hold_samples=4, low=0.0, high=1.0)
    y = free_run(structure, coefficients.mid(), u, np.zeros(structure.max_lag))
    data_path = tmp_path / "surrogate.csv"
    write_dataset_csv(data_path, Dataset(u, y, name="rlc-surrogate"))
    out = tmp_path / "val"
    assert run(
        "validate", "--data", data_path, "--model", fixture_path("rlc_series"),
        "--mode", "osa", "--out", out,
    ) == 0
    summary = (out / "rmse_summary.csv").read_text().splitlines()[1]
    assert float(summary.split(",")[3]) < 1e-10


def test_reruns_are_byte_identical(tmp_path, linear_csvs):
    out = tmp_path / "sel"
    argv = ["select", "--data", linear_csvs["est"], "--l", 1, "--ny", 1, "--nu", 1,
            "--d", 1, "--out", out]
    names = ("structure.model", "selection_report.csv", "aic_trace.csv", "manifest.txt")
    assert run(*argv) == 0
    first = {name: (out / name).read_bytes() for name in names}
    assert run(*argv) == 0
    for name in names:
        assert (out / name).read_bytes() == first[name], name


def test_manifest_contents(tmp_path, linear_csvs):
    out = tmp_path / "sel"
    run("select", "--data", linear_csvs["est"], "--l", 1, "--ny", 1, "--nu", 1,
        "--d", 1, "--out", out)
    manifest = (out / "manifest.txt").read_text()
    assert "command=select" in manifest
    assert "sha256_data=" in manifest
    assert "narxiv_version=" in manifest
    assert "kernel_backend=" in manifest


def test_config_file_supplies_defaults(tmp_path, linear_csvs):
    config = tmp_path / "run.cfg"
    config.write_text("l=1\nny=1\nnu=1\nd=1\n")
    out = tmp_path / "sel"
    assert run("--config", config, "select", "--data", linear_csvs["est"], "--out", out) == 0
    structure, _ = read_model_file(out / "structure.model")
    assert len(structure) == 2


def test_usage_errors_exit_one(tmp_path):
    assert run("select", "--data", tmp_path / "missing.csv", "--l", 1, "--ny", 1,
               "--nu", 1, "--d", 1) == 1
    assert run("select") == 1
    assert run() == 1
    assert run("frobnicate") == 1
    assert run("generate") == 1


def test_free_run_divergence_exits_two(tmp_path, capsys):
    data_path = tmp_path / "ramp.csv"
    write_dataset_csv(data_path, Dataset(np.zeros(50), np.linspace(1.5, 2.0, 50), name="ramp"))
    model_path = tmp_path / "unstable.model"
    model_path.write_text("n_y=1\nn_u=0\nd=1\nl=3\ny(k-1)^3 : 2.0:2.0\n")
    assert run(
        "validate", "--data", data_path, "--model", model_path,
        "--mode", "free-run", "--out", tmp_path / "out",
    ) == 2
    assert "DivergenceError" in capsys.readouterr().err


def test_estimate_verification_failure_exits_two(tmp_path, linear_csvs, capsys):
    structure_path = tmp_path / "structure.model"
    structure_path.write_text("n_y=1\nn_u=1\nd=1\nl=1\ny(k-1)\nu(k-1)\n")
    # half-unit widening on a unit-level record: the interval normal
    # equations contain singular members and certification must decline
    assert run(
        "estimate", "--data", linear_csvs["est"], "--structure", structure_path,
        "--widen", "abs:0.5", "--out", tmp_path / "out",
    ) == 2
    assert "VerificationFailedError" in capsys.readouterr().err


def test_numerical_failures_exit_two(tmp_path, capsys):
    # constant input makes the two candidate columns collinear: rank error
    n = 80
    data_path = tmp_path / "flat.csv"
    write_dataset_csv(data_path, Dataset(np.ones(n), np.linspace(0, 1, n), name="flat"))
    structure_path = tmp_path / "structure.model"
    structure_path.write_text("n_y=0\nn_u=1\nd=1\nl=1\n1\nu(k-1)\n")
    assert run(
        "estimate", "--data", data_path, "--structure", structure_path,
        "--out", tmp_path / "out",
    ) == 2
    captured = capsys.readouterr()
    assert "RankDeficientError" in captured.err
