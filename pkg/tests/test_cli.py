"""Exit codes, output files, determinism, and the validate suites."""

import hashlib
import json

import pytest

from strongcouple.cli import main

QUICK = {"t_max": 2.0, "n_samples": 401}


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("run")
    cfg = write_json(tmp / "cfg.json", QUICK)
    out = tmp / "out"
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    return out


class TestRunCommand:
    def test_files_written(self, run_dir):
        names = {p.name for p in run_dir.iterdir()}
        assert {"thermo_system.csv", "thermo_environment.csv",
                "info_measures.csv", "diagnostics.csv", "manifest.json",
                "plot_thermo.py", "plot_info.py"} <= names

    def test_csv_shapes(self, run_dir):
        lines = (run_dir / "thermo_system.csv").read_text().splitlines()
        assert lines[0] == "t,W,Q,C,dU"
        assert len(lines) == 402
        info = (run_dir / "info_measures.csv").read_text().splitlines()
        assert info[0].startswith("t,entropy_system,")
        assert len(info) == 402

    def test_manifest_hashes(self, run_dir):
        manifest = json.loads((run_dir / "manifest.json").read_text())
        assert manifest["tool"] == "strongcouple"
        assert manifest["config"]["t_max"] == 2.0
        for name, meta in manifest["outputs"].items():
            blob = (run_dir / name).read_bytes()
            assert hashlib.sha256(blob).hexdigest() == meta["sha256"]

    def test_rerun_is_byte_identical(self, run_dir, tmp_path):
        cfg = write_json(tmp_path / "cfg.json", QUICK)
        out2 = tmp_path / "out2"
        assert main(["run", "--config", cfg, "--out", str(out2)]) == 0
        for name in ("thermo_system.csv", "thermo_environment.csv",
                     "info_measures.csv", "diagnostics.csv"):
            assert (run_dir / name).read_bytes() == (out2 / name).read_bytes()

    def test_plot_scripts_compile(self, run_dir):
        for name in ("plot_thermo.py", "plot_info.py"):
            compile((run_dir / name).read_text(), name, "exec")


class TestRunErrors:
    def test_unknown_key(self, tmp_path):
        cfg = write_json(tmp_path / "cfg.json", {"alpha": 0.5, "spin": 2})
        assert main(["run", "--config", cfg,
                     "--out", str(tmp_path / "o")]) == 2

    def test_unknown_integrator_key(self, tmp_path):
        cfg = write_json(tmp_path / "cfg.json",
                         {"integrator": {"order": 4}})
        assert main(["run", "--config", cfg,
                     "--out", str(tmp_path / "o")]) == 2

    def test_bad_json(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["run", "--config", str(cfg),
                     "--out", str(tmp_path / "o")]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "absent.json"),
                     "--out", str(tmp_path / "o")]) == 2

    def test_wrong_type(self, tmp_path):
        cfg = write_json(tmp_path / "cfg.json", {"alpha": "big"})
        assert main(["run", "--config", cfg,
                     "--out", str(tmp_path / "o")]) == 2

    def test_closure_violation(self, tmp_path):
        cfg = write_json(tmp_path / "cfg.json", {"n_samples": 101})
        assert main(["run", "--config", cfg,
                     "--out", str(tmp_path / "o")]) == 3


class TestSweepCommand:
    def test_grid_run(self, tmp_path):
        grid = write_json(tmp_path / "grid.json",
                          {"alpha": [0.0, 1.0], "t_max": 2.0,
                           "n_samples": 401})
        out = tmp_path / "sw"
        assert main(["sweep", "--grid", grid, "--out", str(out)]) == 0
        lines = (out / "summary.csv").read_text().splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("alpha,beta,gamma,")
        assert (out / "manifest.json").exists()

    def test_gamma_t_max_scaling(self, tmp_path, capsys):
        grid = write_json(tmp_path / "grid.json",
                          {"gamma": [1.0, 2.0], "gamma_t_max": 2.0,
                           "n_samples": 401})
        out = tmp_path / "sw"
        assert main(["sweep", "--grid", grid, "--out", str(out)]) == 0
        rows = (out / "summary.csv").read_text().splitlines()[1:]
        t_maxes = [float(r.split(",")[3]) for r in rows]
        assert t_maxes == [2.0, 1.0]
        # on a shared dimensionless horizon the curves must collapse
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["scaled_horizon_collapse"] is True
        assert manifest["scaled_horizon_spread"] <= 1e-9
        assert "collapse across gamma" in capsys.readouterr().out

    def test_all_runs_failing_exits_nonzero(self, tmp_path):
        # a grid too coarse for closure fails every run
        grid = write_json(tmp_path / "grid.json",
                          {"alpha": [0.3, 0.7], "n_samples": 101})
        out = tmp_path / "sw"
        assert main(["sweep", "--grid", grid, "--out", str(out)]) == 3
        lines = (out / "summary.csv").read_text().splitlines()
        assert len(lines) == 3

    def test_partial_failure_still_succeeds(self, tmp_path):
        grid = write_json(tmp_path / "grid.json",
                          {"alpha": [0.5], "gamma": [1.0, 40.0],
                           "t_max": 2.0, "n_samples": 401})
        out = tmp_path / "sw"
        # gamma = 40 needs a much finer grid, so that row fails closure
        assert main(["sweep", "--grid", grid, "--out", str(out)]) == 0
        rows = (out / "summary.csv").read_text().splitlines()[1:]
        assert len(rows) == 2
        assert "closure" in rows[1]

    def test_conflicting_horizons(self, tmp_path):
        grid = write_json(tmp_path / "grid.json",
                          {"t_max": 1.0, "gamma_t_max": 1.0})
        assert main(["sweep", "--grid", grid,
                     "--out", str(tmp_path / "o")]) == 2

    def test_unknown_grid_key(self, tmp_path):
        grid = write_json(tmp_path / "grid.json", {"p": [0.1]})
        assert main(["sweep", "--grid", grid,
                     "--out", str(tmp_path / "o")]) == 2

    def test_empty_axis(self, tmp_path):
        grid = write_json(tmp_path / "grid.json", {"alpha": []})
        assert main(["sweep", "--grid", grid,
                     "--out", str(tmp_path / "o")]) == 2


@pytest.fixture(scope="module")
def default_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("default") / "out"
    assert main(["run", "--out", str(out)]) == 0
    return out


class TestDefaultRun:
    def test_default_grid_size(self, default_dir):
        lines = (default_dir / "thermo_system.csv").read_text().splitlines()
        assert len(lines) == 2002

    def test_late_time_disentangled(self, default_dir):
        rows = (default_dir / "info_measures.csv").read_text().splitlines()
        header = rows[0].split(",")
        last = dict(zip(header, (float(v) for v in rows[-1].split(","))))
        assert last["heat_asymmetry"] < 1e-3
        assert last["negativity"] < 1e-3


class TestValidateCommand:
    def test_default_suites_pass(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "[FAIL]" not in out
        assert out.count("[PASS]") >= 10

    def test_strict_suites_pass(self, capsys):
        assert main(["validate", "--strict"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") >= 13


class TestParser:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "strongcouple" in capsys.readouterr().out

    def test_requires_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
