"""CLI surface: parsing, exit codes, formats, determinism."""

import json
import math
import subprocess
import sys

import pytest

from adamskit.cli import main, parse_args
from adamskit.constants import AdamsParams, beta0


def run_cli(args, capsys):
    status = main(args)
    captured = capsys.readouterr()
    return status, captured.out, captured.err


class TestParsing:
    def test_t0_defaults(self):
        args = parse_args(["t0"])
        assert args.command == "t0"
        assert args.seed == 0
        assert args.rtol == 1e-10

    def test_parse_ok_domain_fails_later(self, capsys):
        # m >= n parses fine; the domain check happens in run().
        args = parse_args(["constants", "--m", "3", "--n", "3"])
        assert args.command == "constants"
        status, _out, err = run_cli(["constants", "--m", "3", "--n", "3"], capsys)
        assert status == 2
        assert "domain error" in err

    def test_cc_family_mapping(self):
        args = parse_args(["cc", "--p", "2", "--family", "moser", "--a", "1000"])
        assert args.command == "cc"
        assert args.family == "moser"
        assert args.a == 1000.0

    def test_malformed_exits_64(self):
        result = subprocess.run(
            [sys.executable, "-m", "adamskit.cli", "constants", "--m", "x", "--n", "4"],
            capture_output=True,
        )
        assert result.returncode == 64

    def test_help_exits_zero(self):
        result = subprocess.run(
            [sys.executable, "-m", "adamskit.cli", "--help"], capture_output=True
        )
        assert result.returncode == 0
        assert b"constants" in result.stdout

    def test_env_rtol_override(self, monkeypatch):
        monkeypatch.setenv("ADAMS_QUAD_RTOL", "1e-8")
        assert parse_args(["t0"]).rtol == 1e-8


class TestCommands:
    def test_constants_value(self, capsys):
        status, out, _ = run_cli(["constants", "--m", "2", "--n", "4"], capsys)
        assert status == 0
        payload = json.loads(out)
        assert payload["beta0"] == pytest.approx(32 * math.pi**2, rel=1e-12)
        assert payload["beta0"] == pytest.approx(315.8273, abs=5e-4)

    def test_t0_payload(self, capsys):
        status, out, _ = run_cli(["t0"], capsys)
        assert status == 0
        payload = json.loads(out)
        assert payload["T0"] == 52
        assert payload["n_threshold"] == 104
        assert payload["raw"] == pytest.approx(51.9233, abs=5e-4)

    def test_level_classical(self, capsys):
        status, out, _ = run_cli(["level", "--m", "1", "--n", "2"], capsys)
        payload = json.loads(out)
        assert status == 0
        assert payload["level"] == pytest.approx(1 + math.e, abs=1e-12)

    def test_hardy_probe_ok(self, capsys):
        status, out, _ = run_cli(
            ["hardy", "--p", "2", "--q", "2", "--alpha", "-1", "--theta", "-3",
             "--trials", "4"],
            capsys,
        )
        payload = json.loads(out)
        assert status == 0
        assert payload["probe_ok"] is True
        assert payload["max_ratio"] <= payload["upper"] + 1e-9

    def test_hardy_infeasible_is_domain_error(self, capsys):
        status, _out, err = run_cli(
            ["hardy", "--p", "2", "--q", "2", "--alpha", "3", "--theta", "0"], capsys
        )
        assert status == 2
        assert "domain error" in err

    def test_cc_moser(self, capsys):
        status, out, _ = run_cli(
            ["cc", "--p", "2", "--family", "moser", "--a", "1000"], capsys
        )
        payload = json.loads(out)
        assert status == 0
        assert payload["within_level"] is True
        assert payload["J"] == pytest.approx(3.0040, abs=2e-3)

    def test_rearrange_roundtrip(self, tmp_path, capsys):
        src = tmp_path / "cells.csv"
        src.write_text("1.0,2.0\n0.5,-3.5\n2.0,1.0\n", encoding="utf-8")
        status, out, _ = run_cli(["rearrange", "--input", str(src)], capsys)
        assert status == 0
        assert out.splitlines() == [
            "measure,value",
            "0.5,3.5",
            "1.0,2.0",
            "2.0,1.0",
        ]

    def test_sweep_csv_header_and_gaps(self, capsys):
        status, out, _ = run_cli(
            ["extremal-sweep", "--n-from", "100", "--n-to", "140", "--step", "2"],
            capsys,
        )
        assert status == 0
        lines = out.splitlines()
        assert lines[0] == "n,norm_chain,norm_quad,J_lower,J_quad,level,gap_analytic,gap_numeric"
        for line in lines[1:]:
            fields = line.split(",")
            if int(fields[0]) >= 104:
                assert fields[6] == "true"

    def test_sweep_json_echoes_params(self, capsys):
        status, out, _ = run_cli(
            ["--format", "json", "extremal-sweep", "--n-from", "104", "--n-to", "106"],
            capsys,
        )
        payload = json.loads(out)
        assert status == 0
        assert payload[0]["params"]["lambda"] > 104 / 2


class TestOutputContracts:
    def test_seventeen_digit_json_round_trips(self, capsys):
        _status, out, _ = run_cli(["constants", "--m", "1", "--n", "2"], capsys)
        payload = json.loads(out)
        # 17 significant digits means the parsed value is bit-identical to
        # the library value.
        assert payload["beta0"] == beta0(AdamsParams(1, 2))
        emitted = out.split('"beta0": ')[1].split(",")[0]
        assert len(emitted.replace(".", "").replace("-", "").lstrip("0")) >= 16

    def test_byte_identical_given_seed(self, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        base = ["--seed", "7", "hardy", "--p", "2", "--q", "2", "--alpha", "-1",
                "--theta", "-3", "--trials", "6"]
        assert main(["--output", str(first)] + base) == 0
        assert main(["--output", str(second)] + base) == 0
        assert first.read_bytes() == second.read_bytes()
        assert b"\r" not in first.read_bytes()

    def test_csv_format_flag(self, capsys):
        status, out, _ = run_cli(
            ["--format", "csv", "t0"], capsys
        )
        assert status == 0
        lines = out.splitlines()
        assert lines[0] == "raw,T0,n_threshold"
        assert lines[1].split(",")[1] == "52"

    def test_quadrature_stall_exits_3(self, capsys):
        # An unreachable tolerance forces the nonconvergence path.
        status, _out, err = run_cli(
            ["--rtol", "1e-300", "cc", "--p", "2", "--family", "moser", "--a", "4"],
            capsys,
        )
        assert status == 3
        assert "quadrature" in err
