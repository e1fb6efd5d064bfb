"""Tests for serialization, CSV/JSON emission, and the CLI."""

import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from holediff.cli import main
from holediff.maps import MapKind, ModelConfig
from holediff.rational import float17, format_rational, parse_rational
from holediff.records import SCHEMAS, ScanKind, ScanRecord, write_csv


GOLDEN_S2 = """index,a1,a2,a3,a4,D,D_float
0,0/1,1/4,3/4,1/1,1/2,0.5
1,1/4,1/2,1/2,3/4,0/1,0
mean,,,,,1/4,0.25
"""


def run_cli(args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "holediff.cli", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


class TestRationalSerialization:
    def test_round_trip(self):
        for text in ("5/64", "0/1", "1/3", "7/2"):
            assert format_rational(parse_rational(text)) == text

    def test_parse_flexibility(self):
        assert parse_rational("0.25") == F(1, 4)
        assert parse_rational("3") == F(3)
        with pytest.raises(ValueError):
            parse_rational("abc")

    def test_float17_digits(self):
        assert float17(F(1, 3)) == "0.33333333333333331"
        assert float17(F(1, 2)) == "0.5"


class TestRecords:
    def test_golden_csv_for_s2_scan(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        assert main(["scan-positions", "--s", "2", "--out", str(out)]) == 0
        capsys.readouterr()
        assert out.read_text() == GOLDEN_S2

    def test_schema_headers_are_stable(self):
        assert SCHEMAS[ScanKind.POSITIONS] == [
            "index", "a1", "a2", "a3", "a4", "D", "D_float",
        ]
        assert SCHEMAS[ScanKind.SIMULATION] == ["n", "msd", "stderr", "survivors"]

    def test_rows_follow_schema_order(self):
        record = ScanRecord(ScanKind.PHI, {"phi_float": "0.5", "x": "1/4", "phi": "1/2"})
        assert record.row() == ["1/4", "1/2", "0.5"]

    def test_config_record_round_trip(self):
        config = ModelConfig.nonsymmetric(MapKind.TENT, F(9, 16), F(1, 16))
        assert ModelConfig.from_record(config.to_record()) == config


class TestCli:
    def test_exit_codes(self):
        assert run_cli(["diffusion", "--a1", "1/8", "--a2", "1/4"]).returncode == 0
        assert run_cli(["diffusion", "--a1", "2/3", "--a2", "1/2"]).returncode == 2
        assert run_cli(["diffusion", "--a1", "bogus", "--a2", "1/2"]).returncode == 2

    def test_diffusion_json(self):
        res = run_cli(
            ["diffusion", "--a1", "1/8", "--a2", "3/16", "--format", "json"]
        )
        doc = json.loads(res.stdout)
        assert doc["records"][0]["D"] == "5/64"
        assert doc["records"][0]["D_rw"] == "1/16"

    def test_scan_positions_tent_constant(self):
        res = run_cli(
            ["scan-positions", "--map", "tent", "--s", "5", "--format", "json"]
        )
        doc = json.loads(res.stdout)
        rows = [r for r in doc["records"] if r["index"] != "mean"]
        assert all(r["D"] == "1/32" for r in rows)

    def test_scan_size_extremum_flags(self):
        grid = ",".join(f"1/{n}" for n in range(10, 19))
        res = run_cli(
            ["scan-size", "--point", "1/3", "--fix-left", "--h", grid, "--format", "json"]
        )
        doc = json.loads(res.stdout)
        flags = {r["h"]: r["extremum"] for r in doc["records"]}
        assert flags["1/12"] == "min"  # the right edge 5/12 runs a standing orbit
        assert flags["1/15"] == "max"  # the right edge 2/5 runs a running orbit

    def test_phi_endpoints(self):
        res = run_cli(["phi", "--s", "4", "--format", "json"])
        doc = json.loads(res.stdout)
        assert doc["records"][0]["phi"] == "0/1"
        assert doc["records"][-1]["phi"] == "0/1"

    def test_escape_pairs_D_and_gamma(self):
        res = run_cli(["escape", "--s", "4", "--format", "json"])
        doc = json.loads(res.stdout)
        rows = doc["records"]
        assert len(rows) == 8 + 2  # positions plus two mean conventions
        assert rows[-2]["index"] == "mean_arithmetic"
        assert rows[-1]["index"] == "reference_2h"
        assert doc["summary"]["gamma_reference_2h"] == pytest.approx(2.0 / 16)

    def test_po_expansion_summary(self):
        res = run_cli(
            ["po-expansion", "--a1", "0/1", "--a2", "1/8", "--pmax", "4",
             "--format", "json"]
        )
        doc = json.loads(res.stdout)
        assert doc["summary"]["exact"] == "5/16"
        assert doc["records"][0]["class"] == "running"

    def test_simulate_smoke(self, tmp_path):
        out = tmp_path / "sim.csv"
        res = run_cli(
            ["simulate", "--a1", "1/8", "--a2", "1/4", "--particles", "4000",
             "--steps", "200", "--seed", "4", "--transient", "3", "--out", str(out)]
        )
        assert res.returncode == 0
        summary = json.loads(res.stdout)
        assert "D_est" in summary and "gamma_est" in summary
        header = out.read_text().splitlines()[0]
        assert header == "n,msd,stderr,survivors"

    def test_nonsymmetric_config_flags(self):
        res = run_cli(
            ["diffusion", "--placement", "nonsymmetric", "--map", "tent",
             "--a2", "1/8", "--a3", "5/8", "--format", "json"]
        )
        doc = json.loads(res.stdout)
        assert doc["records"][0]["a4"] == "3/4"
