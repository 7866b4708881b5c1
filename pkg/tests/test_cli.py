import json

import numpy as np
import pytest

from torusnls import (
    FilterSpec,
    RoughDataSpec,
    SequenceSample,
    SpectralField,
    apply_projector,
    make_grid,
    rough_data,
)
from torusnls import stateio
from torusnls.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_tiny_plan(tmp_path, **extra):
    doc = {
        "dim": 1,
        "n_per_axis": 64,
        "s": [1.0],
        "T": 0.5,
        "tau_ladder": ["2^-3", "2^-4", "2^-5", "2^-6"],
        "reference": {"tau_ref": "2^-10"},
        "seeds": [0],
        "dealias_policy": "warn",
    }
    doc.update(extra)
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(doc))
    return path


class TestSolve:
    def test_basic_run(self, tmp_path, capsys):
        out_path = tmp_path / "final.tnls"
        code, out, err = run_cli(
            capsys, "solve", "--dim", "1", "--n", "64", "--s", "1", "--tau", "2^-6",
            "--T", "0.5", "--mu", "-1", "--filtered", "--seed", "7",
            "--out", str(out_path),
        )
        assert code == 0
        assert out_path.exists()
        lines = dict(l.split(": ", 1) for l in out.strip().splitlines())
        assert float(lines["mass_end"]) <= float(lines["mass_start"]) + 1e-12
        assert int(lines["steps"]) == 32

    def test_dim_gate_exit_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "solve", "--dim", "6", "--n", "8", "--s", "1",
            "--tau", "0.1", "--T", "0.1",
        )
        assert code == 2
        assert "error" in err

    def test_zero_time_writes_projected_input(self, tmp_path, capsys):
        out_path = tmp_path / "final.json"
        code, _, _ = run_cli(
            capsys, "solve", "--dim", "1", "--n", "64", "--s", "1", "--tau", "0.25",
            "--T", "0", "--seed", "3", "--out", str(out_path),
        )
        assert code == 0
        g = make_grid(1, 64)
        u0 = rough_data(RoughDataSpec(grid=g, s=1.0, seed=3, target_l2=0.1))
        expected = apply_projector(u0, FilterSpec(0.25))
        back = stateio.load_field(out_path)
        assert np.abs(back.coeffs - expected.coeffs).max() < 1e-15

    def test_init_file(self, tmp_path, capsys):
        g = make_grid(1, 32)
        u0 = rough_data(RoughDataSpec(grid=g, s=0.5, seed=1))
        init = tmp_path / "init.tnls"
        stateio.save_field(init, u0)
        code, out, _ = run_cli(
            capsys, "solve", "--init-file", str(init), "--tau", "2^-5",
            "--T", "0.25", "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["steps"] == 8

    def test_blowup_exit_3(self, tmp_path, capsys):
        g = make_grid(1, 32)
        huge = SpectralField(g, np.full(32, 2e6 + 0j))
        init = tmp_path / "huge.tnls"
        stateio.save_field(init, huge)
        code, _, err = run_cli(
            capsys, "solve", "--init-file", str(init), "--tau", "0.125",
            "--T", "0.25", "--mu", "1", "--no-filtered",
        )
        assert code == 3
        assert "numerical abort" in err

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as info:
            main(["solve", "--bogus", "1"])
        assert info.value.code == 2

    def test_nondividing_tau_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "solve", "--dim", "1", "--n", "64", "--s", "1",
            "--tau", "0.3", "--T", "1.0",
        )
        assert code == 2
        assert "divide" in err


class TestConverge:
    def test_dry_run_touches_nothing(self, tmp_path, capsys):
        plan = write_tiny_plan(tmp_path, output={"json": str(tmp_path / "r.json")})
        code, out, _ = run_cli(capsys, "converge", str(plan), "--dry-run")
        assert code == 0
        doc = json.loads(out)
        assert doc["dim"] == 1
        assert not (tmp_path / "r.json").exists()

    def test_full_run_writes_reports(self, tmp_path, capsys):
        plan = write_tiny_plan(tmp_path)
        out_json = tmp_path / "report.json"
        out_csv = tmp_path / "report.csv"
        code, out, _ = run_cli(
            capsys, "converge", str(plan), "--quiet",
            "--out-json", str(out_json), "--out-csv", str(out_csv),
        )
        assert code == 0
        doc = json.loads(out_json.read_text())
        assert doc["kind"] == "convergence"
        rows = out_csv.read_text().strip().splitlines()
        assert rows[0] == "s,seed,tau,l2_error"
        assert len(rows) == 1 + 4  # header + 4 ladder points
        assert "slope=" in out

    def test_malformed_plan_exit_2(self, tmp_path, capsys):
        path = tmp_path / "plan.json"
        path.write_text('{"dim": 1, "bogus": true}')
        code, _, err = run_cli(capsys, "converge", str(path))
        assert code == 2
        assert "bogus" in err or "missing" in err

    def test_invalid_json_diagnostic(self, tmp_path, capsys):
        path = tmp_path / "plan.json"
        path.write_text('{"dim": 1,,}')
        code, _, err = run_cli(capsys, "converge", str(path))
        assert code == 2
        assert "line" in err

    def test_seed_override(self, tmp_path, capsys):
        plan = write_tiny_plan(tmp_path)
        code, out, _ = run_cli(
            capsys, "converge", str(plan), "--dry-run", "--seeds", "5,6",
        )
        assert code == 0
        assert json.loads(out)["seeds"] == [5, 6]


class TestLocalError:
    def test_smoke(self, tmp_path, capsys):
        plan = write_tiny_plan(
            tmp_path,
            tau_ladder=["2^-4", "2^-5", "2^-6", "2^-7"],
        )
        # reference block is ignored by the defect study
        out_json = tmp_path / "le.json"
        code, out, _ = run_cli(
            capsys, "local-error", str(plan), "--quiet", "--out-json", str(out_json),
        )
        assert code == 0
        doc = json.loads(out_json.read_text())
        assert doc["kind"] == "local-error"
        assert doc["curves"][0]["theoretical_slope"] == 1.5


class TestRegimeCheckCli:
    def test_human_output(self, capsys):
        code, out, _ = run_cli(capsys, "regime-check", "--dim", "3", "--s0", "1")
        assert code == 0
        assert "b0 in (0.5, 0.625)" in out
        assert "admissible" in out

    def test_inadmissible_is_exit_zero(self, capsys):
        code, out, _ = run_cli(capsys, "regime-check", "--dim", "5", "--s0", "1.4")
        assert code == 0
        assert "inadmissible" in out

    def test_json_schema_golden(self, capsys):
        code, out, _ = run_cli(capsys, "regime-check", "--dim", "3", "--s0", "0.7", "--json")
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {
            "d", "s0", "admissible", "s0_condition", "b0_interval",
            "b0_interval_empty", "b0", "b0_admissible", "b1", "table1_row",
        }
        assert set(doc["table1_row"]) == {"case", "s0_interval", "p", "q", "p_crude", "q_crude"}
        assert doc["table1_row"]["p_crude"] == "inf"
        assert doc["table1_row"]["p"] == 15.0

    def test_dim_gate(self, capsys):
        code, _, err = run_cli(capsys, "regime-check", "--dim", "7", "--s0", "1")
        assert code == 2


class TestBourgainNormCli:
    def test_zero_sequence(self, tmp_path, capsys):
        g = make_grid(1, 8)
        seq = SequenceSample(
            tau=0.5, fields=[SpectralField(g, np.zeros(8, complex))] * 2
        )
        path = tmp_path / "seq.json"
        stateio.save_sequence_json(path, seq)
        code, out, _ = run_cli(capsys, "bourgain-norm", "--input", str(path), "--s", "1", "--b", "0.5")
        assert code == 0
        assert "= 0.0" in out

    def test_json_schema_golden(self, tmp_path, capsys):
        g = make_grid(1, 8)
        seq = SequenceSample(
            tau=0.5,
            fields=[rough_data(RoughDataSpec(grid=g, s=0.5, seed=k)) for k in range(2)],
        )
        path = tmp_path / "seq.json"
        stateio.save_sequence_json(path, seq)
        code, out, _ = run_cli(capsys, "bourgain-norm", "--input", str(path), "--json")
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"norm", "s", "b", "sequence_length", "sigma_samples", "tau"}
        assert doc["sequence_length"] == 2
        assert doc["sigma_samples"] == 4
        assert doc["norm"] > 0

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "bourgain-norm", "--input", "/nonexistent.json")
        assert code == 2
