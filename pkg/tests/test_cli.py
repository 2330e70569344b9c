import json

import pytest
from click.testing import CliRunner

from quiverchow.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_invariants_table(runner):
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1"])
    assert result.exit_code == 0
    assert "degree" in result.output
    assert "K_3(1,1)" in result.output
    again = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1"])
    assert again.output == result.output  # byte-for-byte deterministic


def test_invariants_json(runner):
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1",
                                  "--format", "json"])
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert body["degree"] == 1
    assert body["hilbert_values"] == [1, 3, 6, 10]
    assert body["chi_T"] == 8


def test_file_input(runner, tmp_path):
    spec = {"vertices": 2, "arrows": [[0, 1], [0, 1], [0, 1]], "d": [1, 1]}
    path = tmp_path / "q.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["invariants", "--file", str(path), "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["dimension"] == 2


def test_theta_flag(runner, tmp_path):
    spec = {"vertices": 2, "arrows": [[0, 1], [0, 1], [0, 1]], "d": [1, 1]}
    path = tmp_path / "q.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["invariants", "--file", str(path), "--theta", "1,-1",
                                  "--format", "json"])
    assert result.exit_code == 0


def test_usage_errors(runner):
    # no input source
    assert runner.invoke(main, ["invariants"]).exit_code == 1
    # both input sources
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1",
                                  "--file", "nonexistent.json"])
    assert result.exit_code != 0
    # malformed theta
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1",
                                  "--theta", "a,b"])
    assert result.exit_code == 1


def test_non_coprime_exit_code(runner, tmp_path):
    spec = {"vertices": 2, "arrows": [[0, 1], [0, 1]], "d": [2, 2]}
    path = tmp_path / "q.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["invariants", "--file", str(path)])
    assert result.exit_code == 2
    assert "coprime" in result.output


def test_structural_exit_code(runner):
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "7", "2"])
    assert result.exit_code == 3


def test_point_class_command(runner):
    result = runner.invoke(main, ["point-class", "--kronecker", "3", "1", "1"])
    assert result.exit_code == 0
    assert "integral   1" in result.output
    assert "1 * x_2_1^2" in result.output


def test_todd_command(runner):
    result = runner.invoke(main, ["todd", "--kronecker", "3", "1", "1"])
    assert result.exit_code == 0
    assert "deg 1: 3/2 * x_2_1" in result.output


def test_hilbert_command(runner):
    result = runner.invoke(main, ["hilbert", "--kronecker", "4", "1", "2"])
    assert result.exit_code == 0
    assert "values     1, 6, 20, 50, 105, 196" in result.output
    assert "numerator  1 + t" in result.output


def test_polarization_flag(runner):
    result = runner.invoke(main, ["hilbert", "--kronecker", "3", "1", "1",
                                  "--polarization", "0,2"])
    assert result.exit_code == 0
    assert "values     1, 6, 15, 28" in result.output


def test_series_length_flag(runner):
    result = runner.invoke(main, ["hilbert", "--kronecker", "3", "1", "1",
                                  "--series-length", "5"])
    assert result.exit_code == 0
    assert "values     1, 3, 6, 10, 15, 21" in result.output


def test_check_quick(runner):
    result = runner.invoke(main, ["check", "--level", "quick"])
    assert result.exit_code == 0
    assert "0 failed" in result.output
    assert "PASS census row K_3(2,3)" in result.output


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("invariants", "point-class", "todd", "hilbert", "check", "serve"):
        assert cmd in result.output


def test_threads_and_theta_flags(runner):
    result = runner.invoke(main, ["invariants", "--kronecker", "3", "1", "1",
                                  "--threads", "2", "--theta", "1 -1",
                                  "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["degree"] == 1


def test_malformed_kronecker_is_usage(runner):
    result = runner.invoke(main, ["invariants", "--kronecker", "a", "b", "c"])
    assert result.exit_code == 1


def test_cross_process_determinism():
    # identical bytes across interpreter runs with different hash seeds
    import os
    import subprocess
    import sys

    outputs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "quiverchow.cli", "invariants",
             "--kronecker", "3", "2", "3", "--format", "json"],
            capture_output=True, env=env, check=True)
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
