import csv
import json
import subprocess
import sys

import pytest

from pointopt import cli
from pointopt.configurations import canonical_loop


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timestamp(text):
    doc = json.loads(text)
    doc.pop("timestamp")
    return doc


def test_spectrum_octahedron_named_file(capsys):
    code, out, err = run_cli(["spectrum", "--setting", "sphere", "--alpha", "-1", "--config", "octahedron.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["results"][0]["lambda1"] < 0
    assert doc["runspec"]["seed"] == 0 and doc["runspec"]["N"] == 6
    assert err.startswith("spectrum:")


def test_spectrum_config_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "y.json"
    path.write_text(canonical_loop(3).to_json())
    code, out, _ = run_cli(["spectrum", "--alpha", "-2", "--config", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["runspec"]["setting"] == "loop"


def test_verify_example(tmp_path, capsys):
    target = tmp_path / "out" / "verify.json"
    code, _, err = run_cli(["verify", "--setting", "loop", "--alpha", "-2", "--n", "5", "--trials", "200",
                            "--seed", "7", "--out", str(target)], capsys)
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["result"]["violations"] == 0
    assert doc["runspec"]["seed"] == 7
    assert "violations: 0" in err
    assert [p.name for p in target.parent.iterdir()] == ["verify.json"]


def test_design_check_icosahedron(capsys):
    code, out, _ = run_cli(["design-check", "--n", "12"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["design_strength"] >= 5


def test_identical_runspec_identical_output(capsys):
    args = ["verify", "--setting", "circle3", "--alpha", "-1", "--n", "4", "--trials", "10", "--seed", "3"]
    _, a, _ = run_cli(args, capsys)
    _, b, _ = run_cli(args, capsys)
    assert strip_timestamp(a) == strip_timestamp(b)
    spec = cli.resolve_runspec(cli.build_parser().parse_args(args))
    assert cli.run(spec, now="T")[1] == cli.run(spec, now="T")[1]
    capsys.readouterr()


def test_csv_output_has_runspec_and_full_precision(capsys):
    code, out, _ = run_cli(["asymptotics", "--setting", "loop", "--n", "3", "--mode", "strong", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# runspec: ")
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["alpha", "lambda1", "model_value", "residual"]
    assert float(rows[2][1]) == pytest.approx(2.25, rel=1e-2)
    assert len(rows[1][1].replace("-", "").replace(".", "").lstrip("0")) >= 15


def test_conjecture_scan_and_alpha_grid(capsys):
    code, out, _ = run_cli(["conjecture-scan", "--n", "3", "--alpha-min", "0.5", "--alpha-max", "1.5",
                            "--alpha-steps", "3", "--trials", "4"], capsys)
    assert code == 0
    rows = json.loads(out)["result"]["rows"]
    assert [r["alpha"] for r in rows] == [0.5, 1.0, 1.5]


def test_optimize_surface(capsys):
    code, out, _ = run_cli(["optimize", "--objective", "surface", "--n", "4", "--starts", "3"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["reports"][0]["matched_canonical"] is True


def test_optimize_lambda1(capsys):
    code, out, _ = run_cli(["optimize", "--setting", "loop", "--alpha", "-1", "--n", "2", "--starts", "2"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["reports"][0]["matched_canonical"] is True


@pytest.mark.parametrize("args,fragment", [
    (["verify", "--setting", "loop", "--alpha", "-1", "--n", "3"], "--trials"),
    (["spectrum", "--setting", "loop", "--n", "3"], "--alpha"),
    (["design-check", "--n", "5"], "design-check supports"),
    (["spectrum", "--setting", "bogus", "--alpha", "1"], "invalid choice"),
    (["verify", "--alpha", "1", "--alpha-min", "0"], "conflicts"),
    (["conjecture-scan", "--n", "3", "--alpha", "-1", "--trials", "2"], "positive"),
])
def test_usage_errors_are_structured(args, fragment, capsys, tmp_path):
    out_path = tmp_path / "never.json"
    code, out, _ = run_cli(args + ["--out", str(out_path)], capsys)
    assert code == cli.EXIT_USAGE
    err = json.loads(out)["error"]
    assert err["kind"] == "usage" and fragment in err["message"]
    assert not out_path.exists()


def test_solver_error_exit_code(capsys, tmp_path):
    out_path = tmp_path / "x.json"
    code, out, _ = run_cli(["spectrum", "--setting", "circle3", "--alpha", "1", "--n", "2", "--out", str(out_path)], capsys)
    assert code == cli.EXIT_SOLVER
    assert json.loads(out)["error"]["type"] == "NoBoundStateError"
    assert not out_path.exists()


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "pointopt.cli", "design-check", "--n", "6", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "6,3,2"
