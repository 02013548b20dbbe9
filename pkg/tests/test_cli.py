import csv
import json
import math
import subprocess
import sys

import pytest
from conftest import EX1_SUM

from varbound.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    GridSpec,
    fmt,
    main,
    run_audit,
    run_sweep,
)

COARSE = ["--grid-density", "4"]


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(4.25) == "4.25"
    assert fmt(math.pi) == "3.14159265359"
    assert fmt(1e-20) == "1e-20"


class TestSweep:
    def test_example1_full_period(self, tmp_path):
        out = tmp_path / "ex1.csv"
        assert main(["sweep", "--example", "1", "--output", str(out)] + COARSE) == EXIT_OK
        rows = _rows(out)
        assert rows[0] == ["theta", "sum", "song", "zhang", "lb1_opt", "lb1_alpha", "lb2_opt", "lb2_t"]
        assert len(rows) == 202
        first = dict(zip(rows[0], rows[1]))
        assert float(first["theta"]) == 0.0
        assert float(first["sum"]) == pytest.approx(EX1_SUM, abs=1e-12)
        assert float(rows[-1][0]) == pytest.approx(2 * math.pi)

    def test_example2_fixed_alpha(self, tmp_path):
        out = tmp_path / "ex2.csv"
        code = main(["sweep", "--example", "2", "--alpha", "5", "--steps", "101", "--output", str(out)] + COARSE)
        assert code == EXIT_OK
        rows = _rows(out)
        assert rows[0][-1] == "lb1_fixed"
        assert len(rows) == 102
        manifest = json.loads((tmp_path / "ex2.manifest.json").read_text())
        assert manifest["example_id"] == 2
        assert manifest["alpha_fixed"] == 5.0
        assert manifest["rows"] == 101
        assert all(k == k.lower() for k in manifest)

    def test_example3_rows_keyed_by_theta(self, tmp_path):
        out = tmp_path / "ex3.csv"
        args = ["sweep", "--example", "3", "--phi", str(math.pi / 2), "--steps", "11", "--permutations"]
        assert main(args + ["--output", str(out)] + COARSE) == EXIT_OK
        rows = _rows(out)
        assert rows[0][:2] == ["theta", "phi"]
        assert rows[0][-1] == "lb1_pi_opt"
        thetas = [float(r[0]) for r in rows[1:]]
        assert thetas == sorted(thetas)
        assert thetas[-1] == pytest.approx(math.pi)

    def test_rows_valid(self, tmp_path):
        res = run_sweep(1, 0.0, 2 * math.pi, 9, GridSpec(points_per_octave=2), alpha_fixed=0.5, permutations=True)
        total = res.header.index("sum")
        for row in res.rows:
            bounds = [v for name, v in zip(res.header, row) if name in ("song", "zhang", "lb1_opt", "lb2_opt", "lb1_fixed", "lb1_pi_opt")]
            assert max(bounds) <= row[total] + 1e-9
        assert res.violations == 0

    def test_byte_stable(self, tmp_path):
        args = ["sweep", "--example", "2", "--steps", "7", "--refine"] + COARSE
        main(args + ["--output", str(tmp_path / "a.csv")])
        main(args + ["--output", str(tmp_path / "b.csv")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_out_of_range_theta(self, tmp_path):
        code = main(["sweep", "--example", "2", "--theta-max", "2", "--output", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE

    def test_too_few_steps(self, tmp_path):
        assert main(["sweep", "--example", "1", "--steps", "1", "--output", str(tmp_path / "x.csv")]) == EXIT_USAGE

    def test_unwritable(self, tmp_path):
        out = tmp_path / "missing" / "x.csv"
        assert main(["sweep", "--example", "1", "--steps", "2", "--output", str(out)] + COARSE) == EXIT_IO


class TestUsage:
    def test_unknown_example(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["sweep", "--example", "4", "--output", str(tmp_path / "x.csv")])
        assert info.value.code == EXIT_USAGE

    def test_no_command(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == EXIT_USAGE

    def test_bad_grid(self, tmp_path):
        code = main(["audit", "--trials", "1", "--grid-min-exp", "3", "--grid-max-exp", "1", "--output", str(tmp_path / "a.json")])
        assert code == EXIT_USAGE


class TestBounds:
    def test_single_point_json(self, capsys):
        assert main(["bounds", "--example", "1", "--theta", "0", "--alpha", "0.5"] + COARSE) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["sum"] == pytest.approx(EX1_SUM, abs=1e-12)
        assert out["song"] == pytest.approx(3.9337, abs=1e-4)
        assert out["zhang"] == pytest.approx(4.0127, abs=1e-4)
        assert out["lb1"] >= out["zhang"]
        assert out["lb1_fixed_alpha"] == 0.5
        assert out["lb2_member"].startswith("THM2_")
        assert all(not isinstance(v, (dict, list)) for v in out.values())


class TestAudit:
    def test_small_audit(self, tmp_path):
        out = tmp_path / "audit.json"
        code = main(["audit", "--trials", "12", "--dims", "2,3", "--nobs", "2,3,4", "--seed", "7", "--output", str(out)] + COARSE)
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report["trials"] == 12
        assert report["violations"] == 0
        assert report["worst_margin"] >= -1e-9
        assert report["seed"] == 7

    def test_deterministic(self, tmp_path):
        args = ["audit", "--trials", "1", "--seed", "123"] + COARSE
        main(args + ["--output", str(tmp_path / "a.json")])
        main(args + ["--output", str(tmp_path / "b.json")])
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_run_audit_api(self):
        report = run_audit([2], [2, 3], 4, seed=1, grid=GridSpec(points_per_octave=2))
        assert report.violations == 0
        assert report.worst_trial in range(4)

    def test_empty_dims(self, tmp_path):
        assert main(["audit", "--dims", "", "--trials", "1", "--output", str(tmp_path / "a.json")]) == EXIT_USAGE


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "varbound", "bounds", "--example", "3", "--theta", "0.7", "--grid-density", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["example_id"] == 3
