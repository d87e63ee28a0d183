"""Console entry point: exit codes, file outputs, determinism."""

import subprocess
import sys

import pytest

from spinmemory.cli import main

POINTS = ["--points", "5"]


def run_cli(*argv):
    """Invoke main() in-process; returns (exit_code,)."""
    return main(list(argv))


class TestSweepGamma:
    def test_writes_csv_and_png(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli("sweep-gamma", "--out", str(out), *POINTS) == 0
        assert out.exists()
        png = out.with_suffix(".png")
        assert png.exists()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_no_plot_skips_png(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli("sweep-gamma", "--out", str(out), "--no-plot",
                       *POINTS) == 0
        assert out.exists()
        assert not out.with_suffix(".png").exists()

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("sweep-gamma", "--out", str(a), "--no-plot", *POINTS)
        run_cli("sweep-gamma", "--out", str(b), "--no-plot", *POINTS)
        assert a.read_text() == b.read_text()

    def test_config_file_honoured(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("r_squeeze = 0.0\n")
        out = tmp_path / "flat.csv"
        run_cli("sweep-gamma", "--config", str(cfg), "--out", str(out),
                "--no-plot", *POINTS)
        # vacuum input: every variance column stays at 1
        header = out.read_text().splitlines()
        col = header[0].split(",").index("var_I_y")
        for line in header[1:]:
            assert float(line.split(",")[col]) == pytest.approx(1.0, abs=1e-8)

    def test_bad_config_exits_2(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma_q = 1.0\n")
        assert run_cli("sweep-gamma", "--config", str(cfg), *POINTS) == 2

    def test_missing_config_exits_2(self, tmp_path):
        assert run_cli("sweep-gamma", "--config",
                       str(tmp_path / "absent.cfg")) == 2


class TestSweepFieldError:
    def test_writes_outputs(self, tmp_path):
        out = tmp_path / "field.csv"
        assert run_cli("sweep-field-error", "--out", str(out),
                       "--db-over-b", "0,1e-4", *POINTS) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 2 * 5
        assert out.with_suffix(".png").exists()

    def test_bad_db_list_exits_2(self, tmp_path):
        assert run_cli("sweep-field-error", "--db-over-b", "0,fast",
                       *POINTS) == 2


class TestOperatingPoint:
    def test_prints_report(self, tmp_path, capsys):
        out = tmp_path / "point.csv"
        assert run_cli("operating-point", "--out", str(out)) == 0
        captured = capsys.readouterr().out
        assert "magnetic field B" in captured
        assert out.exists()


class TestInvariants:
    def test_short_suite_via_console_script(self, tmp_path):
        # exercise the installed entry point end to end (plot-free path)
        proc = subprocess.run(
            [sys.executable, "-m", "spinmemory.cli", "operating-point"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "magnetic field B" in proc.stdout
