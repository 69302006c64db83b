import json
import subprocess
import sys

import numpy as np
import pytest


def run_cli(*args, cwd, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "thinspec", *args],
        capture_output=True, text=True, cwd=cwd, env=full_env,
    )


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    return header, data


class TestSpectrum:
    def test_n4_zero_field_rows(self, tmp_path):
        res = run_cli(
            "spectrum", "--n", "4", "--j", "1", "--b", "0", "--t", "0.2",
            "--out", "spec", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        header, data = read_csv(tmp_path / "spec.csv")
        assert header == ["n", "energy", "weight"]
        np.testing.assert_allclose(data[:, 1], [-1.0, -0.5, 0.5], atol=1e-12)
        assert abs(data[:, 2].sum() - 1.0) < 1e-12
        summary = json.loads((tmp_path / "spec.json").read_text())
        assert summary["dim"] == 3 and summary["b_eff"] == 0.0
        assert summary["params"]["n"] == 4

    def test_rejects_bad_n(self, tmp_path):
        res = run_cli("spectrum", "--n", "6", "--t", "0.2", cwd=tmp_path)
        assert res.returncode == 2
        err = json.loads(res.stderr.strip())
        assert err["error"] == "parameter"
        assert "multiple of 4" in err["message"]

    def test_guard_passes_at_desk_scale(self, tmp_path):
        res = run_cli(
            "spectrum", "--n", "1000", "--j", "1", "--b", "0.01", "--t", "0.05",
            "--out", "s", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        summary = json.loads((tmp_path / "s.json").read_text())
        assert summary["n_max"] < 450
        assert summary["dim"] == 501


class TestCoherence:
    def test_uncoupled_trace_never_crosses(self, tmp_path):
        res = run_cli(
            "coherence", "--method", "exact", "--n", "64", "--b", "0.01",
            "--t", "0.45", "--gamma", "0", "--tmax", "50", "--steps", "51",
            "--out", "c", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        header, data = read_csv(tmp_path / "c.csv")
        assert header == ["t", "re_C", "im_C", "abs_C"]
        np.testing.assert_array_equal(data[:, 3], 1.0)
        summary = json.loads((tmp_path / "c.json").read_text())
        assert summary["t_coh"] is None and summary["min_abs_C"] == 1.0

    def test_require_crossing_exit_code(self, tmp_path):
        res = run_cli(
            "coherence", "--method", "exact", "--n", "64", "--b", "0.01",
            "--t", "0.45", "--gamma", "0", "--tmax", "10", "--steps", "11",
            "--require-crossing", "--out", "c", cwd=tmp_path,
        )
        assert res.returncode == 4

    def test_approx_period_value(self, tmp_path):
        res = run_cli(
            "coherence", "--method", "approx", "--n", "2000", "--b", "0.01",
            "--t", "0.45", "--gamma", "0.5", "--tmax", "100", "--steps", "11",
            "--out", "c", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        summary = json.loads((tmp_path / "c.json").read_text())
        assert abs(summary["period_approx"] - 2 * np.pi * 1600.0) < 1e-8

    def test_meanfield_population_columns(self, tmp_path):
        res = run_cli(
            "coherence", "--method", "meanfield", "--n", "64", "--b", "0.01",
            "--t", "0.45", "--gamma", "0.5", "--delta", "0.005",
            "--tmax", "20", "--steps", "21", "--out", "m", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        header, data = read_csv(tmp_path / "m.csv")
        assert header == ["t", "re_C", "im_C", "abs_C", "p_singlet", "p_triplet0"]
        assert abs(data[0, 4] - 1.0) < 1e-12
        np.testing.assert_allclose(data[:, 4] + data[:, 5], 1.0, atol=1e-10)

    def test_exact_rejects_delta(self, tmp_path):
        res = run_cli(
            "coherence", "--method", "exact", "--n", "64", "--b", "0.01",
            "--t", "0.45", "--gamma", "0.5", "--delta", "0.1",
            "--tmax", "10", "--steps", "11", cwd=tmp_path,
        )
        assert res.returncode == 2


class TestSweep:
    def test_n_axis_endpoint_validation(self, tmp_path):
        res = run_cli(
            "sweep", "--axis", "N", "--from", "400", "--to", "402",
            "--points", "6", "--n", "400", "--t", "0.45", "--b", "0.01",
            "--gamma", "0.5", cwd=tmp_path,
        )
        assert res.returncode == 2
        assert "multiple of 4" in json.loads(res.stderr.strip())["message"]

    def test_too_few_points(self, tmp_path):
        res = run_cli(
            "sweep", "--axis", "T", "--from", "0.4", "--to", "1.0",
            "--points", "3", "--n", "400", "--t", "0.45", "--b", "0.01",
            "--gamma", "0.5", cwd=tmp_path,
        )
        assert res.returncode == 2

    def test_frozen_point_exits_3(self, tmp_path):
        res = run_cli(
            "sweep", "--axis", "T", "--from", "0.02", "--to", "0.03",
            "--points", "4", "--method", "approx", "--n", "400", "--t", "0.45",
            "--b", "0.01", "--gamma", "0.5", cwd=tmp_path,
        )
        assert res.returncode == 3
        err = json.loads(res.stderr.strip())
        assert err["error"] == "sweep" and "T=0.02" in err["message"]

    def test_b_axis_csv_and_summary(self, tmp_path):
        res = run_cli(
            "sweep", "--axis", "B", "--from", "0.002", "--to", "0.01",
            "--points", "4", "--method", "approx", "--n", "400", "--t", "0.45",
            "--b", "0.01", "--gamma", "0.5", "--out", "sw", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        header, data = read_csv(tmp_path / "sw.csv")
        assert header == ["axis_value", "t_coh"]
        assert data.shape == (4, 2) and (data[:, 1] > 0).all()
        summary = json.loads((tmp_path / "sw.json").read_text())
        assert {"axis", "exponent", "stderr", "r_squared",
                "constant_of_proportionality", "params"} <= set(summary)


class TestConfig:
    def test_unknown_key_rejected(self, tmp_path):
        (tmp_path / "cfg.json").write_text('{"n": 4, "t": 0.2, "banana": 1}')
        res = run_cli("spectrum", "--config", "cfg.json", cwd=tmp_path)
        assert res.returncode == 2
        assert "banana" in json.loads(res.stderr.strip())["message"]

    def test_flags_override_config(self, tmp_path):
        (tmp_path / "cfg.json").write_text('{"n": 4, "t": 0.2, "b": 0.5}')
        res = run_cli(
            "spectrum", "--config", "cfg.json", "--b", "0.25", "--out", "s",
            cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        summary = json.loads((tmp_path / "s.json").read_text())
        assert summary["params"]["b"] == 0.25

    def test_echo_round_trip_is_byte_identical(self, tmp_path):
        args = (
            "coherence", "--method", "approx", "--n", "400", "--b", "0.01",
            "--t", "0.45", "--gamma", "0.5", "--tmax", "500", "--steps", "257",
        )
        res = run_cli(*args, "--out", "first", cwd=tmp_path)
        assert res.returncode == 0, res.stderr
        echo = json.loads((tmp_path / "first.json").read_text())["params"]
        (tmp_path / "echo.json").write_text(json.dumps(echo))
        res = run_cli(
            "coherence", "--config", "echo.json", "--out", "second", cwd=tmp_path
        )
        assert res.returncode == 0, res.stderr
        first = (tmp_path / "first.csv").read_bytes()
        second = (tmp_path / "second.csv").read_bytes()
        assert first == second

    def test_json_table_format(self, tmp_path):
        res = run_cli(
            "spectrum", "--n", "4", "--t", "0.2", "--format", "json",
            "--out", "s", cwd=tmp_path,
        )
        assert res.returncode == 0, res.stderr
        assert not (tmp_path / "s.csv").exists()
        summary = json.loads((tmp_path / "s.json").read_text())
        assert summary["columns"] == ["n", "energy", "weight"]
        assert len(summary["rows"]) == 3
