"""Command-line interface: exit codes, output contracts, reports."""

import csv
import json

import pytest

from lasuscc import cli

from conftest import H4_CASCI_ENERGY, H4_LAS_ENERGY

H4_JOB = {
    "system": {"h2_clusters": {"n_units": 2, "separation": 1.46}},
    "fragments": [
        {"orbitals": [0, 1], "n_alpha": 1, "n_beta": 1},
        {"orbitals": [2, 3], "n_alpha": 1, "n_beta": 1},
    ],
    "epsilon_ladder": [0.1, 0.01, 0.001, 0.0],
}


@pytest.fixture()
def h4_job(tmp_path):
    path = tmp_path / "h4.json"
    path.write_text(json.dumps(H4_JOB))
    return str(path)


def _strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def test_count_prints_exact_triple(h4_job, capsys):
    assert cli.main(["count", "--job", h4_job]) == 0
    assert capsys.readouterr().out == "singles 8, doubles 138, total 146\n"


def test_count_h8(tmp_path, capsys):
    job = dict(H4_JOB)
    job["system"] = {"h2_clusters": {"n_units": 4, "separation": 1.46}}
    job["fragments"] = [
        {"orbitals": [2 * k, 2 * k + 1], "n_alpha": 1, "n_beta": 1}
        for k in range(4)
    ]
    path = tmp_path / "h8.json"
    path.write_text(json.dumps(job))
    assert cli.main(["count", "--job", str(path)]) == 0
    assert capsys.readouterr().out == "singles 48, doubles 2748, total 2796\n"


def test_unknown_flag_exits_one_with_usage(h4_job, capsys):
    assert cli.main(["count", "--job", h4_job, "--frobnicate"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err.lower()


def test_unknown_command_exits_one(capsys):
    assert cli.main(["transmogrify"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_missing_job_file_exits_one_and_names_path(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert cli.main(["count", "--job", missing]) == 1
    err = capsys.readouterr().err
    assert "nope.json" in err


def test_invalid_job_schema_exits_one_and_names_path(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    payload = dict(H4_JOB)
    payload["epsilon_ladder"] = [0.001, 0.01]  # must be decreasing
    bad.write_text(json.dumps(payload))
    assert cli.main(["count", "--job", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "bad.json" in err


def test_las_report_values(h4_job, tmp_path, capsys):
    out = tmp_path / "las.json"
    assert cli.main(["las", "--job", h4_job, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["command"] == "las"
    las = report["stages"]["las"]
    assert las["energy"] == pytest.approx(H4_LAS_ENERGY, abs=1e-10)
    assert las["converged"]


def test_casci_report_values(h4_job, tmp_path):
    out = tmp_path / "casci.json"
    assert cli.main(["casci", "--job", h4_job, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    stage = report["stages"]["reference"]
    assert stage["energy"] == pytest.approx(H4_CASCI_ENERGY, abs=1e-10)
    assert stage["s_squared"] == pytest.approx(0.0, abs=1e-9)


def test_screen_csv_shape(h4_job, tmp_path):
    out = tmp_path / "screen.csv"
    assert cli.main(["screen", "--job", h4_job, "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["label", "kind", "abs_gradient", "selected"]
    assert len(rows) == 1 + 146
    mags = [float(r[2]) for r in rows[1:]]
    assert mags == sorted(mags, reverse=True)
    assert {r[3] for r in rows[1:]} == {"0", "1"}
    # default epsilon is the smallest positive ladder rung (0.001 -> 40).
    assert sum(r[3] == "1" for r in rows[1:]) == 40


def test_run_report_and_csv(h4_job, tmp_path, capsys):
    out = tmp_path / "run.json"
    assert cli.main(
        ["run", "--job", h4_job, "--epsilon", "0.001", "--out", str(out)]
    ) == 0
    report = json.loads(out.read_text())
    stage = report["stages"]["vqe"]
    assert stage["n_params"] == 40
    assert stage["converged"]
    assert stage["energy"] == pytest.approx(H4_CASCI_ENERGY, abs=1e-6)
    assert stage["s_squared"] == pytest.approx(0.0, abs=1e-8)
    assert len(stage["amplitudes"]) == 40
    assert abs(stage["delta_e_vs_reference_kcal_mol"]) < 1e-3

    out_csv = tmp_path / "run.csv"
    assert cli.main(
        ["run", "--job", h4_job, "--epsilon", "0.001", "--out", str(out_csv)]
    ) == 0
    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "epsilon", "n_params", "energy", "delta_e_vs_reference_kcal_mol",
        "iterations", "n_cnot_est", "n_sqg_est",
    ]
    assert len(rows) == 2
    assert int(rows[1][1]) == 40


def test_run_top_n_reports_implied_epsilon(h4_job, tmp_path):
    out = tmp_path / "topn.json"
    assert cli.main(
        ["run", "--job", h4_job, "--top-n", "12", "--out", str(out)]
    ) == 0
    stage = json.loads(out.read_text())["stages"]["vqe"]
    assert stage["n_params"] == 12
    assert stage["epsilon"] == pytest.approx(0.03871044249616453, rel=1e-10)


def test_run_epsilon_and_top_n_conflict(h4_job, capsys):
    assert cli.main(
        ["run", "--job", h4_job, "--epsilon", "0.01", "--top-n", "5"]
    ) == 1


def test_run_iteration_cap_writes_partial_report_and_exits_two(
    tmp_path, capsys
):
    job = dict(H4_JOB)
    job["optimizer"] = {"max_iterations": 2}
    path = tmp_path / "capped.json"
    path.write_text(json.dumps(job))
    out = tmp_path / "partial.json"
    assert cli.main(
        ["run", "--job", str(path), "--epsilon", "0.001", "--out", str(out)]
    ) == 2
    report = json.loads(out.read_text())
    stage = report["stages"]["vqe"]
    assert stage["converged"] is False
    assert stage["iterations"] == 2
    assert "iteration cap" in capsys.readouterr().err


def test_sweep_stdout_csv_and_monotone_energies(h4_job, capsys):
    assert cli.main(["sweep", "--job", h4_job]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == [
        "epsilon", "n_params", "energy", "delta_e_vs_reference_kcal_mol",
        "iterations", "n_cnot_est", "n_sqg_est",
    ]
    assert len(rows) == 1 + 4
    assert [int(r[1]) for r in rows[1:]] == [0, 12, 40, 146]
    energies = [float(r[2]) for r in rows[1:]]
    assert energies == sorted(energies, reverse=True)[::-1] or all(
        b <= a + 1e-12 for a, b in zip(energies, energies[1:])
    )
    assert energies[0] == pytest.approx(H4_LAS_ENERGY, abs=1e-9)
    assert energies[-1] == pytest.approx(H4_CASCI_ENERGY, abs=1e-6)


def test_sweep_json_report(h4_job, tmp_path):
    out = tmp_path / "sweep.json"
    assert cli.main(["sweep", "--job", h4_job, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    rungs = report["stages"]["sweep"]["rungs"]
    assert [r["n_params"] for r in rungs] == [0, 12, 40, 146]
    assert all("amplitudes" not in r for r in rungs)


def test_reports_are_deterministic_modulo_timing(h4_job, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert cli.main(["run", "--job", h4_job, "--epsilon", "0.01", "--out", str(a)]) == 0
    assert cli.main(["run", "--job", h4_job, "--epsilon", "0.01", "--out", str(b)]) == 0
    ra = json.loads(a.read_text())
    rb = json.loads(b.read_text())
    assert _strip_timing(ra) == _strip_timing(rb)
    assert ra != rb or ra["timing"] == rb["timing"]


def test_resources_counts_only(h4_job, capsys):
    assert cli.main(["resources", "--job", h4_job, "--counts-only"]) == 0
    out = capsys.readouterr().out
    assert "146" in out and "6656" in out and "10016" in out


def test_resources_full_table(h4_job, capsys):
    assert cli.main(["resources", "--job", h4_job]) == 0
    out = capsys.readouterr().out
    assert "100.00" in out
    # the epsilon=0.001 selection: 40 doubles only
    assert "1920" in out  # 40 * 48 CNOTs


def test_threads_env_fallback(h4_job, capsys, monkeypatch):
    monkeypatch.setenv("LAS_USCC_THREADS", "2")
    assert cli.main(["screen", "--job", h4_job]) == 0
    monkeypatch.setenv("LAS_USCC_THREADS", "0")
    assert cli.main(["screen", "--job", h4_job]) == 1
    assert "threads" in capsys.readouterr().err


def test_jcoupling_from_reports(h4_job, tmp_path, capsys):
    # Two synthetic run reports with known energies and spin expectations.
    def fake_report(path, energy, s2):
        path.write_text(json.dumps({
            "schema_version": 1,
            "command": "run",
            "stages": {"vqe": {"energy": energy, "s_squared": s2}},
        }))

    high = tmp_path / "high.json"
    low = tmp_path / "low.json"
    fake_report(high, -2649.1455510, 12.0)
    fake_report(low, -2649.1461837, 0.0)
    out = tmp_path / "j.json"
    assert cli.main(
        ["jcoupling", str(low), str(high), "--out", str(out)]
    ) == 0
    report = json.loads(out.read_text())
    j = report["stages"]["jcoupling"]["j_cm1"]
    assert j == pytest.approx(-11.5718, abs=5e-4)
    printed = capsys.readouterr().out
    assert "-11.57" in printed


def test_jcoupling_s2_overrides(tmp_path):
    def fake_report(path, energy, s2):
        path.write_text(json.dumps({
            "schema_version": 1,
            "command": "run",
            "stages": {"vqe": {"energy": energy, "s_squared": s2}},
        }))

    high = tmp_path / "high.json"
    low = tmp_path / "low.json"
    fake_report(high, -2649.1455510, 11.5)   # contaminated values,
    fake_report(low, -2649.1461837, 0.4)     # overridden below
    out = tmp_path / "j.json"
    assert cli.main([
        "jcoupling", str(high), str(low),
        "--s2-high", "12", "--s2-low", "0", "--out", str(out),
    ]) == 0
    j = json.loads(out.read_text())["stages"]["jcoupling"]["j_cm1"]
    assert j == pytest.approx(-11.5718, abs=5e-4)


def test_jcoupling_degenerate_spin_exits_one(tmp_path, capsys):
    def fake_report(path, energy, s2):
        path.write_text(json.dumps({
            "schema_version": 1,
            "command": "run",
            "stages": {"vqe": {"energy": energy, "s_squared": s2}},
        }))

    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    fake_report(a, -1.0, 2.0)
    fake_report(b, -1.1, 2.0)
    assert cli.main(["jcoupling", str(a), str(b)]) == 1
    assert "[jcoupling]" in capsys.readouterr().err


def test_jcoupling_missing_report_exits_one(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({
        "schema_version": 1, "command": "run",
        "stages": {"vqe": {"energy": -1.0, "s_squared": 0.0}},
    }))
    missing = str(tmp_path / "gone.json")
    assert cli.main(["jcoupling", str(a), missing]) == 1
    err = capsys.readouterr().err
    assert "[jcoupling]" in err and "gone.json" in err
