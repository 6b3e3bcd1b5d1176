import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from pyrotopo.cli import main
from pyrotopo.experiment import SweepSpec, run_sweep, sweep_csv
from pyrotopo.layout import build_checkerboard, build_linear, serialize_site_plan


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerate:
    def test_checkerboard_to_stdout(self, capsys):
        code, out, err = run_cli(capsys, "generate", "--family", "checkerboard", "--side", "10")
        assert code == 0 and err == ""
        assert out == serialize_site_plan(build_checkerboard(10))
        lines = out.splitlines()
        assert len(lines) == 10
        assert out.count("B") == 25

    def test_repeat_runs_byte_identical(self, capsys):
        args = ("generate", "--family", "comb", "--spine", "6", "--tooth", "3", "--pitch", "2")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "plan.txt"
        code, out, _ = run_cli(
            capsys, "generate", "--family", "linear", "--n", "3", "-o", str(target)
        )
        assert code == 0 and out == ""
        assert target.read_text() == serialize_site_plan(build_linear(3))

    def test_missing_family_parameter(self, capsys):
        code, _, err = run_cli(capsys, "generate", "--family", "checkerboard")
        assert code == 2
        assert err.startswith("error:") and "--side" in err

    def test_unknown_family_rejected_by_argparse(self, capsys):
        with pytest.raises(SystemExit):
            main(["generate", "--family", "igloo"])

    def test_invalid_side_reports_error(self, capsys):
        code, _, err = run_cli(capsys, "generate", "--family", "checkerboard", "--side", "7")
        assert code == 2 and "even" in err


class TestEgress:
    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "egress", "--family", "checkerboard", "--side", "10")
        assert code == 0
        payload = json.loads(out)
        assert payload["mean"] == pytest.approx(2.2)
        assert payload["aisle_cells"] == 75
        assert isinstance(payload["histogram"], list)

    def test_text_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "egress", "--family", "linear", "--n", "4", "--format", "text"
        )
        assert code == 0
        assert out == "mean 1\nmax 1\naisle_cells 4\nunreachable_cells 0\n"

    def test_plan_file_matches_family(self, capsys, tmp_path):
        plan = tmp_path / "plan.txt"
        plan.write_text(serialize_site_plan(build_checkerboard(10)))
        _, from_file, _ = run_cli(capsys, "egress", str(plan))
        _, from_family, _ = run_cli(
            capsys, "egress", "--family", "checkerboard", "--side", "10"
        )
        assert from_file == from_family

    def test_stdin_plan(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("B.B\n...\n"))
        code, out, _ = run_cli(capsys, "egress", "-")
        assert code == 0
        assert json.loads(out)["aisle_cells"] == 4

    def test_svg_side_artifact(self, capsys, tmp_path):
        target = tmp_path / "field.svg"
        code, _, _ = run_cli(
            capsys, "egress", "--family", "checkerboard", "--side", "8", "--svg", str(target)
        )
        assert code == 0
        ET.fromstring(target.read_text())

    def test_plan_and_family_conflict(self, capsys, tmp_path):
        plan = tmp_path / "plan.txt"
        plan.write_text("B.B\n")
        code, _, err = run_cli(
            capsys, "egress", str(plan), "--family", "linear", "--n", "2"
        )
        assert code == 2 and "not both" in err

    def test_no_input_at_all(self, capsys):
        code, _, err = run_cli(capsys, "egress")
        assert code == 2 and "site-plan" in err

    def test_ragged_plan_names_line(self, capsys, tmp_path):
        plan = tmp_path / "bad.txt"
        plan.write_text("B.B\nB.\n")
        code, _, err = run_cli(capsys, "egress", str(plan))
        assert code == 2 and "line 2" in err

    def test_missing_file_is_input_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "egress", str(tmp_path / "nope.txt"))
        assert code == 2 and err.startswith("error:")


class TestFire:
    def test_seed_is_required(self):
        with pytest.raises(SystemExit):
            main(["fire", "--family", "checkerboard", "--side", "10"])

    def test_json_and_determinism(self, capsys):
        args = (
            "fire", "--family", "checkerboard", "--side", "10",
            "--gamma", "0.6", "--max-steps", "80", "--seed", "5",
        )
        code, first, _ = run_cli(capsys, *args)
        assert code == 0
        payload = json.loads(first)
        assert set(payload) == {"burned_fraction", "percolated", "duration"}
        assert 0 < payload["burned_fraction"] <= 1
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_burn_map_artifact(self, capsys, tmp_path):
        target = tmp_path / "burn.txt"
        code, _, _ = run_cli(
            capsys, "fire", "--family", "checkerboard", "--side", "10",
            "--gamma", "1", "--max-steps", "200", "--seed", "1",
            "--burn-map", str(target),
        )
        assert code == 0
        text = target.read_text()
        assert len(text.splitlines()) == 10
        assert text.count("X") == 25  # immortal fire reaches every block

    def test_explicit_ignition(self, capsys):
        code, out, _ = run_cli(
            capsys, "fire", "--family", "checkerboard", "--side", "10",
            "--gamma", "0", "--sparks", "0", "--seed", "0", "--ignition", "1,1",
        )
        assert code == 0
        assert json.loads(out)["burned_fraction"] == pytest.approx(1 / 25)

    def test_bad_ignition_syntax(self, capsys):
        code, _, err = run_cli(
            capsys, "fire", "--family", "linear", "--n", "2",
            "--seed", "0", "--ignition", "northwest",
        )
        assert code == 2 and "ROW,COL" in err

    def test_aisle_ignition_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "fire", "--family", "linear", "--n", "2",
            "--seed", "0", "--ignition", "0,1",
        )
        assert code == 2 and "not a block" in err


class TestGamma:
    def test_crossing_found(self, capsys):
        code, out, _ = run_cli(
            capsys, "gamma", "--family", "linear", "--n", "6", "--r", "1",
            "--max-steps", "80", "--tolerance", "0.05", "--replicates", "60",
            "--seed", "42",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["crossed"] is True
        assert payload["gamma_c"] == pytest.approx(0.890625)
        assert payload["p_at_zero"] == 0.0 and payload["p_at_one"] == 1.0

    def test_no_crossing_exit_code(self, capsys):
        code, out, _ = run_cli(
            capsys, "gamma", "--family", "linear", "--n", "1", "--r", "1",
            "--max-steps", "20", "--tolerance", "0.1", "--replicates", "10",
            "--seed", "0",
        )
        assert code == 3
        assert json.loads(out)["crossed"] is False


class TestCheck:
    def test_passing_plan_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--family", "linear", "--n", "80")
        assert code == 0
        assert json.loads(out)["overall_pass"] is True

    def test_failing_plan_exits_one(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--family", "checkerboard", "--side", "16")
        assert code == 1
        payload = json.loads(out)
        assert payload["overall_pass"] is False
        assert payload["egress_pass"] is False

    def test_small_plan_not_applicable(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--family", "checkerboard", "--side", "8")
        assert code == 0
        assert json.loads(out)["applicable"] is False

    def test_relaxed_bound_flips_verdict(self, capsys):
        code, _, _ = run_cli(
            capsys, "check", "--family", "checkerboard", "--side", "16",
            "--egress-bound", "4",
        )
        assert code == 0

    def test_bad_rule_config(self, capsys):
        code, _, err = run_cli(
            capsys, "check", "--family", "linear", "--n", "80", "--n-threshold", "0"
        )
        assert code == 2 and "n_threshold" in err


class TestSweep:
    def test_csv_matches_library(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--family", "checkerboard", "--n-values", "4,16,25"
        )
        assert code == 0
        rows = run_sweep(SweepSpec(family="checkerboard", n_values=(4, 16, 25)))
        assert out == sweep_csv(rows)

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--family", "linear", "--n-values", "2,4", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert [row["N"] for row in payload] == [2, 4]

    def test_gamma_metric_requires_seed(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--family", "linear", "--n-values", "4",
            "--metrics", "gamma_c",
        )
        assert code == 2 and "--seed" in err

    def test_bad_n_values(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--family", "linear", "--n-values", "4,x"
        )
        assert code == 2 and "--n-values" in err

    def test_unknown_metric(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--family", "linear", "--n-values", "4",
            "--metrics", "entropy",
        )
        assert code == 2 and "entropy" in err


class TestRender:
    def test_plan_svg(self, capsys):
        code, out, _ = run_cli(capsys, "render", "--family", "checkerboard", "--side", "8")
        assert code == 0
        root = ET.fromstring(out)
        assert root.tag.endswith("svg")

    def test_egress_heatmap_mode(self, capsys, tmp_path):
        target = tmp_path / "heat.svg"
        code, _, _ = run_cli(
            capsys, "render", "--family", "checkerboard", "--side", "8",
            "--mode", "egress", "-o", str(target),
        )
        assert code == 0
        ET.fromstring(target.read_text())


class TestEntryPoints:
    def test_console_script(self):
        proc = subprocess.run(
            ["pyrotopo", "generate", "--family", "linear", "--n", "3"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == serialize_site_plan(build_linear(3))

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "pyrotopo", "egress", "--family", "linear", "--n", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["mean"] == 1.0
