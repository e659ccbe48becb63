"""
Test: Command line.
eval, qexp, verify and matrix through typer's runner.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import json
import re

from typer.testing import CliRunner

from main import app

runner = CliRunner()

REAL_PART = re.compile(r"[-+]?\d+(\.\d+)?(e[-+]?\d+)?")


def real_part(text: str) -> float:
    return float(REAL_PART.match(text.strip()).group(0))


def test_eval_eta_at_i():
    result = runner.invoke(app, ["eval", "eta", "--tau", "0,1"])
    assert result.exit_code == 0, result.output
    assert abs(real_part(result.output) - 0.7682254) < 1e-7


def test_eval_theta_at_i():
    result = runner.invoke(app, ["eval", "theta", "--m", "1", "--n", "0", "--tau", "0,1"])
    assert result.exit_code == 0, result.output
    assert abs(real_part(result.output) - 1.00373487) < 1e-8


def test_eval_unknown_function():
    result = runner.invoke(app, ["eval", "zeta"])
    assert result.exit_code == 2


def test_eval_pole_exit_code():
    result = runner.invoke(app, ["eval", "phi", "--m", "1", "--s", "0", "--tau", "0,1", "--z", "0,0"])
    assert result.exit_code == 3


def test_eval_bad_complex():
    result = runner.invoke(app, ["eval", "eta", "--tau", "i"])
    assert result.exit_code == 2


def test_eval_rejects_lower_half_plane():
    result = runner.invoke(app, ["eval", "eta", "--tau", "0,-1"])
    assert result.exit_code == 2


def test_qexp_eta_document():
    result = runner.invoke(app, ["qexp", "eta", "--m", "1", "--order", "3"])
    assert result.exit_code == 0, result.output
    document = json.loads(result.output)
    assert document["function"] == "eta"
    assert document["series"]["terms"][:2] == [[[1, 24], [1, 1]], [[25, 24], [-1, 1]]]


def test_qexp_gauss_reports_identity(tmp_path):
    target = tmp_path / "gauss.json"
    result = runner.invoke(app, ["qexp", "gauss", "--m", "2", "--order", "12", "--json", str(target)])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[0] == "identical: true"
    assert json.loads(target.read_text(encoding="utf-8"))["identical"] is True


def test_qexp_without_expansion():
    result = runner.invoke(app, ["qexp", "G"])
    assert result.exit_code == 2


def test_qexp_theta_low_order():
    result = runner.invoke(app, ["qexp", "theta", "--n", "1/2", "--m", "1", "--order", "1"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["series"]["terms"] == [[[1, 16], [1, 1]], [[9, 16], [1, 1]]]


def test_qexp_respects_configured_conductor():
    env = {"MOCKTHETA_MAX_CONDUCTOR": "24"}
    assert runner.invoke(app, ["qexp", "theta", "--m", "2", "--order", "3"], env=env).exit_code == 2
    assert runner.invoke(app, ["qexp", "theta", "--m", "1", "--order", "3"], env=env).exit_code == 0


def test_qexp_h_pole():
    result = runner.invoke(app, ["qexp", "h", "--m", "1", "--a", "0"])
    assert result.exit_code == 3


def test_verify_with_no_points_passes():
    result = runner.invoke(app, ["verify", "--suite", "phi", "--m", "1/2", "--points", "0", "--quiet"])
    assert result.exit_code == 0, result.output


def test_verify_unknown_suite():
    result = runner.invoke(app, ["verify", "--suite", "nope", "--quiet"])
    assert result.exit_code == 2


def test_verify_rejects_bad_options():
    assert runner.invoke(app, ["verify", "--tol", "0", "--quiet"]).exit_code == 2
    assert runner.invoke(app, ["verify", "--m", "0", "--quiet"]).exit_code == 2


def test_verify_report_is_byte_stable(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        result = runner.invoke(
            app,
            ["verify", "--suite", "theta", "--m", "1/2", "--points", "1", "--seed", "5", "--json", str(path), "--quiet"],
        )
        assert result.exit_code == 0, result.output
    assert paths[0].read_bytes() == paths[1].read_bytes()
    document = json.loads(paths[0].read_text(encoding="utf-8"))
    assert document["seed"] == 5
    assert document["summary"]["failed"] == 0


def test_matrix_S_csv():
    result = runner.invoke(app, ["matrix", "S", "--m", "1/2", "--format", "csv"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[0] == "(0,0,0),(0,1,0)"


def test_matrix_T_needs_integral_level():
    result = runner.invoke(app, ["matrix", "T", "--m", "1/2"])
    assert result.exit_code == 2


def test_matrix_written_to_file(tmp_path):
    target = tmp_path / "T.json"
    result = runner.invoke(app, ["matrix", "T", "--m", "1", "--out", str(target)])
    assert result.exit_code == 0, result.output
    document = json.loads(target.read_text(encoding="utf-8"))
    assert document["kind"] == "T"
    assert len(document["basis"]) == 12
