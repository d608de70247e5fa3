import csv
import json
import math

import numpy as np
import pytest

from sschain.cli.main import main
from sschain.core.exceptions import EXIT_BUDGET, EXIT_OK, EXIT_STABILITY, EXIT_VALIDATION


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    return rows[0], np.array(rows[1:], dtype=float)


class TestDispersion:
    def test_writes_rows(self, tmp_path):
        out = tmp_path / "wm.csv"
        code = main(["dispersion", "--delta", "0.7", "--samples", "64", "--out", str(out)])
        assert code == EXIT_OK
        header, data = read_csv(out)
        assert header == ["kh", "omega_sq", "err_bound"]
        assert data.shape == (64, 3)
        assert data[0, 0] == 0.0
        assert data[0, 1] == 0.0
        assert data[-1, 0] == 30.0
        assert np.all(data[:, 2] >= 0.0)

    def test_deterministic(self, tmp_path):
        args = ["dispersion", "--N", "1.5", "--delta", "0.5", "--samples", "128"]
        main(args + ["--out", str(tmp_path / "a.csv")])
        main(args + ["--out", str(tmp_path / "b.csv")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    @pytest.mark.parametrize("delta", ["0.1", "0.5", "0.7", "1.2"])
    def test_figure_parameters(self, tmp_path, delta):
        out = tmp_path / f"wm_{delta}.csv"
        assert main(["dispersion", "--N", "1.5", "--delta", delta, "--samples", "256", "--out", str(out)]) == EXIT_OK
        _, data = read_csv(out)
        assert np.all(data[1:, 1] > 0.0)

    def test_two_samples(self, tmp_path):
        out = tmp_path / "two.csv"
        assert main(["dispersion", "--delta", "0.7", "--samples", "2", "--kh-min", "0", "--kh-max", "1", "--out", str(out)]) == EXIT_OK
        _, data = read_csv(out)
        assert data.shape == (2, 3)
        assert data[0, 1] == 0.0

    def test_stdout(self, capsys):
        assert main(["dispersion", "--delta", "0.7", "--samples", "3"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "kh,omega_sq,err_bound"
        assert len(lines) == 4

    def test_delta_out_of_range(self, tmp_path, capsys):
        out = tmp_path / "bad.csv"
        code = main(["dispersion", "--delta", "2.5", "--out", str(out)])
        assert code == EXIT_VALIDATION
        assert "(0,2)" in capsys.readouterr().err
        assert not out.exists()

    def test_lists_every_violation(self, capsys):
        code = main(["dispersion", "--N", "1.0", "--delta", "2.5", "--h", "-1"])
        assert code == EXIT_VALIDATION
        err = capsys.readouterr().err
        assert "N must exceed 1" in err
        assert "h must be positive" in err
        assert "(0,2)" in err

    def test_missing_delta(self, capsys):
        assert main(["dispersion"]) == EXIT_VALIDATION
        assert "delta is required" in capsys.readouterr().err

    def test_bad_range(self):
        assert main(["dispersion", "--delta", "0.7", "--kh-min", "0", "--spacing", "log"]) == EXIT_VALIDATION

    def test_config_file_and_override(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"N": 2.0, "delta": 0.5, "samples": 16, "kh-max": 5.0}))
        out = tmp_path / "wm.csv"
        assert main(["--config", str(config), "dispersion", "--samples", "8", "--out", str(out)]) == EXIT_OK
        _, data = read_csv(out)
        assert data.shape == (8, 3)
        assert data[-1, 0] == 5.0

    def test_unreadable_config(self, tmp_path):
        assert main(["--config", str(tmp_path / "missing.json"), "dispersion", "--delta", "0.5"]) == EXIT_VALIDATION

    def test_budget_exhausted(self):
        code = main(["dispersion", "--N", "1.0000001", "--delta", "0.1", "--samples", "10"])
        assert code == EXIT_BUDGET


class TestDensity:
    @pytest.mark.parametrize("delta", [0.5, 1.0, 1.5])
    def test_power_law(self, tmp_path, delta):
        out = tmp_path / "rho.csv"
        assert main(["density", "--delta", str(delta), "--out", str(out)]) == EXIT_OK
        header, data = read_csv(out)
        assert header == ["omega", "rho"]
        assert data[0, 0] == 0.0
        assert data[0, 1] == 0.0
        omega, rho = data[1:, 0], data[1:, 1]
        slopes = np.diff(np.log(rho)) / np.diff(np.log(omega))
        np.testing.assert_allclose(slopes, 2.0 / delta - 1.0, rtol=1e-10)

    @pytest.mark.parametrize("args", [
        ["--delta", "2.0"],
        ["--delta", "0.5", "--epsilon", "0.2"],
        ["--delta", "0.5", "--omega-min", "1.0", "--omega-max", "0.5"],
        ["--delta", "0.5", "--samples", "1"],
    ])
    def test_rejects(self, args):
        assert main(["density"] + args) == EXIT_VALIDATION


class TestFractal:
    def test_selftest(self, tmp_path):
        out = tmp_path / "line.json"
        assert main(["fractal-dim", "--selftest", "--scales", "8", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["predicted"] == 1.0
        assert report["dimension"] == pytest.approx(1.0, abs=0.05)
        assert not report["out_of_range"]

    def test_wm_curve(self, tmp_path):
        out = tmp_path / "wm.json"
        assert main(["fractal-dim", "--delta", "0.5", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["predicted"] == 1.5
        assert report["dimension"] == pytest.approx(1.5, abs=0.15)
        assert len(report["scales"]) == len(report["counts"])

    def test_smooth_curve(self, tmp_path):
        out = tmp_path / "wm.json"
        assert main(["fractal-dim", "--delta", "1.2", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["dimension"] == pytest.approx(1.0, abs=0.1)

    def test_too_few_samples(self):
        assert main(["fractal-dim", "--delta", "0.5", "--samples", "1024"]) == EXIT_VALIDATION


class TestSimulate:
    def test_zero_amplitude(self, tmp_path):
        out_dir = tmp_path / "sim"
        code = main([
            "simulate", "--delta", "0.7", "--M", "64", "--L", "16", "--packet-amplitude", "0",
            "--steps", "10", "--snap-every", "5", "--out-dir", str(out_dir),
        ])
        assert code == EXIT_OK
        report = json.loads((out_dir / "energy.json").read_text())
        assert report["integrator"] == "exact"
        assert [r["snapshot"] for r in report["records"]] == [0, 1, 2]
        assert all(r["total"] == 0.0 for r in report["records"])
        header, data = read_csv(out_dir / "snapshot_00002.csv")
        assert header == ["x", "u", "v"]
        assert data.shape == (64, 3)
        assert not np.any(data[:, 1:])

    def test_mode_energy_conserved(self, tmp_path):
        out_dir = tmp_path / "sim"
        code = main([
            "simulate", "--delta", "0.7", "--M", "128", "--L", "32", "--mode-number", "2",
            "--steps", "200", "--snap-every", "50", "--out-dir", str(out_dir),
        ])
        assert code == EXIT_OK
        report = json.loads((out_dir / "energy.json").read_text())
        assert len(report["records"]) == 5
        assert max(r["drift_rel"] for r in report["records"]) <= 1e-12

    def test_verlet(self, tmp_path):
        out_dir = tmp_path / "sim"
        code = main([
            "simulate", "--delta", "0.7", "--M", "64", "--L", "16", "--integrator", "verlet",
            "--dt", "0.001", "--steps", "20", "--snap-every", "10", "--out-dir", str(out_dir),
        ])
        assert code == EXIT_OK
        report = json.loads((out_dir / "energy.json").read_text())
        assert report["integrator"] == "verlet"
        assert len(report["records"]) == 3

    def test_unstable_verlet(self, tmp_path):
        code = main([
            "simulate", "--delta", "0.7", "--M", "64", "--L", "16", "--integrator", "verlet",
            "--dt", "10", "--out-dir", str(tmp_path / "sim"),
        ])
        assert code == EXIT_STABILITY

    def test_grid_not_power_of_two(self, tmp_path):
        code = main(["simulate", "--delta", "0.7", "--M", "100", "--out-dir", str(tmp_path / "sim")])
        assert code == EXIT_VALIDATION


class TestContinuum:
    def test_constant_field(self, tmp_path):
        out = tmp_path / "c.json"
        code = main(["continuum", "--delta", "0.7", "--field", "constant", "--out", str(out)])
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report["series_value"] == 0.0
        assert report["continuum_value"] == 0.0
        assert report["rel_diff"] == 0.0

    def test_gaussian_packet(self, tmp_path):
        out = tmp_path / "c.json"
        assert main(["continuum", "--delta", "0.7", "--epsilon", "1e-3", "--x", "0", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["rel_diff"] <= 0.01
        assert report["series_err_bound"] >= 0.0

    def test_unit_delta(self, tmp_path):
        out = tmp_path / "c.json"
        assert main(["continuum", "--delta", "1.0", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["C"] == pytest.approx(math.pi, rel=1e-6)
        assert report["longwave_coeff"] == pytest.approx(math.pi / 1e-3, rel=1e-6)
        assert report["rel_diff"] < 0.01

    def test_epsilon_cap(self):
        assert main(["continuum", "--delta", "0.7", "--epsilon", "0.5"]) == EXIT_VALIDATION


def test_no_command(capsys):
    assert main([]) == EXIT_VALIDATION
    assert "usage" in capsys.readouterr().err
