"""Tests for the Typer CLI."""

import csv
import io
import json
import math

import pytest
from typer.testing import CliRunner

from tmspectra.cli.app import app, run
from tmspectra.report.formatters import SCHEMA

runner = CliRunner()


@pytest.fixture(autouse=True)
def use_tmp_dir(tmp_path, monkeypatch):
    """Run CLI commands in a temp directory so no project config is picked up."""
    monkeypatch.chdir(tmp_path)
    for key in ("FORMAT", "WORKERS", "QUICK"):
        monkeypatch.delenv(f"TMSPECTRA_{key}", raising=False)


def _rows(output: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(output)))


def _values(rows: list[dict[str, str]], quantity: str) -> list[float]:
    return [float(r["lo"]) for r in rows if r["quantity"] == quantity]


class TestHelp:
    def test_no_args_shows_usage(self):
        result = runner.invoke(app, [])
        assert "Usage" in result.output

    def test_command_help(self):
        result = runner.invoke(app, ["pressure", "--help"])
        assert result.exit_code == 0
        assert "--restrict" in result.output


class TestSequence:
    def test_classical_prefix(self):
        result = runner.invoke(app, ["sequence", "--c", "1/2", "--length", "4"])
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert _values(rows, "t.re") == pytest.approx([1.0, -1.0, -1.0, 1.0], abs=1e-12)
        assert rows[0]["c"] == "1/2"

    def test_bad_parameter(self):
        result = runner.invoke(app, ["sequence", "--c", "abc"])
        assert result.exit_code == 1


class TestEta:
    def test_json_output(self):
        result = runner.invoke(app, ["eta", "--c", "1/2", "--max-index", "3", "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["schema"] == SCHEMA
        first = next(
            r for r in doc["records"] if r["quantity"] == "eta.re" and r["params"]["n"] == 1
        )
        assert first["lo"] == pytest.approx(-1.0 / 3.0, abs=1e-12)

    def test_max_alias(self):
        result = runner.invoke(app, ["eta", "--c", "1/2", "--max", "3"])
        assert result.exit_code == 0
        assert _values(_rows(result.stdout), "eta.re") == pytest.approx(
            [1.0, -1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0], abs=1e-12
        )


class TestD2:
    def test_c0(self):
        result = runner.invoke(app, ["d2", "--c", "0"])
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        lam = next(r for r in rows if r["quantity"] == "lambda1")
        assert float(lam["lo"]) <= 2.0 <= float(lam["hi"])

    def test_plotdata(self, tmp_path):
        target = tmp_path / "eig.dat"
        result = runner.invoke(
            app, ["d2", "--c", "1/3", "--emit-plotdata", str(target), "--points", "4"]
        )
        assert result.exit_code == 0
        lines = target.read_text().splitlines()
        assert lines[0].startswith("# c ")
        assert len(lines) == 5

    def test_c_grid(self):
        result = runner.invoke(app, ["d2", "--c", "0,1/3,1/2"])
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert [r["c"] for r in rows if r["quantity"] == "d2"] == ["0", "1/3", "1/2"]
        lam = [r for r in rows if r["quantity"] == "lambda1"]
        assert float(lam[0]["lo"]) <= 2.0 <= float(lam[0]["hi"])

    def test_bad_grid(self):
        result = runner.invoke(app, ["d2", "--c", "0:1"])
        assert result.exit_code == 1


class TestRiesz:
    def test_density_points(self):
        result = runner.invoke(app, ["riesz", "--c", "1/3", "--order", "6", "--x", "0,0.25"])
        assert result.exit_code == 0
        assert len(_values(_rows(result.stdout), "density")) == 2

    def test_order_cap(self):
        result = runner.invoke(app, ["riesz", "--c", "1/3", "--order", "40"])
        assert result.exit_code == 1

    def test_coefficients(self):
        result = runner.invoke(
            app, ["riesz", "--c", "1/2", "--order", "2", "--coefficients", "1"]
        )
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert _values(rows, "coeff.re") == pytest.approx([1.0, -0.25], abs=1e-12)
        assert _values(rows, "coeff.im") == pytest.approx([0.0, 0.0], abs=1e-12)
        assert "m=1" in rows[-1]["params"]

    def test_single_cylinder(self):
        result = runner.invoke(app, ["riesz", "--c", "1/2", "--cylinder", "0", "--format", "json"])
        assert result.exit_code == 0
        (rec,) = json.loads(result.stdout)["records"]
        assert rec["quantity"] == "mu"
        assert rec["params"]["word"] == "0"
        assert rec["lo"] <= 0.5 + 1e-9
        assert rec["hi"] >= 0.5 - 1e-9

    def test_modes_are_exclusive(self):
        result = runner.invoke(
            app, ["riesz", "--c", "1/3", "--cylinder", "01", "--coefficients", "2"]
        )
        assert result.exit_code == 1


class TestPressure:
    def test_zero_temperature(self):
        result = runner.invoke(
            app, ["pressure", "--c", "1/3", "--t", "0", "--depth", "4", "--workers", "1"]
        )
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert len(rows) == 1
        assert float(rows[0]["lo"]) == pytest.approx(math.log(2.0), abs=1e-12)
        assert "depth=4" in rows[0]["params"]

    def test_depth_limit(self):
        result = runner.invoke(
            app, ["pressure", "--c", "1/3", "--t", "1", "--depth", "30", "--workers", "1"]
        )
        assert result.exit_code == 1


class TestWords:
    def test_count_and_markov(self):
        result = runner.invoke(
            app, ["words", "--c", "1/2", "--m", "1", "--count", "6", "--markov-check"]
        )
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert _values(rows, "word_count") == [2.0]
        assert _values(rows, "period") == [2.0]

    def test_g_n_json(self):
        result = runner.invoke(app, ["words", "--c", "1/3", "--g", "2", "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        g = next(r for r in doc["records"] if r["quantity"] == "g_n")
        assert sorted(g["meta"]["words"]) == ["00", "10", "11"]

    def test_extension(self):
        result = runner.invoke(app, ["words", "--c", "1/2", "--extend", "0011"])
        assert result.exit_code == 0
        assert _values(_rows(result.stdout), "extension_length") == [1.0]

    def test_inexact_dyadic_is_precision_error(self):
        result = runner.invoke(app, ["words", "--c", "0.5", "--inexact"])
        assert result.exit_code == 2


class TestSpectrum:
    def test_quantization_c0(self):
        result = runner.invoke(
            app, ["spectrum", "--c", "0", "--kind", "quantization", "--workers", "1"]
        )
        assert result.exit_code == 0
        rows = _rows(result.stdout)
        assert len(rows) == 3
        assert all(float(r["lo"]) == float(r["hi"]) == 0.0 for r in rows)

    def test_spectral_c0_rejected(self):
        result = runner.invoke(app, ["spectrum", "--c", "0", "--kind", "spectral"])
        assert result.exit_code == 1


class TestVerify:
    def test_unknown_check(self):
        result = runner.invoke(app, ["verify", "--check", "nope"])
        assert result.exit_code == 1

    def test_selected_checks_pass(self):
        result = runner.invoke(
            app,
            [
                "verify",
                "--quick",
                "--check",
                "lambda1_golden",
                "--check",
                "diffraction_identity",
                "--workers",
                "1",
            ],
        )
        assert result.exit_code == 0
        assert "2/2 checks passed" in result.output


class TestRun:
    def test_returns_zero(self, capsys):
        assert run(["sequence", "--c", "1/3", "--length", "2"]) == 0
        assert "t.re" in capsys.readouterr().out

    def test_precision_error_code(self):
        assert run(["words", "--c", "0.5", "--inexact"]) == 2

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 1

    def test_unknown_flag_is_usage_error(self, capsys):
        assert run(["d2", "--c", "0.5", "--bogus"]) == 1
        assert "--bogus" in capsys.readouterr().err

    def test_bad_option_value(self):
        assert run(["eta", "--c", "1/2", "--max", "many"]) == 1
