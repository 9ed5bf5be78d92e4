import json
import subprocess
import sys

import pytest

from tridecomp.cli import EXIT_ALGORITHM, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, cli_run

from conftest import system_path


def run(argv, capsys):
    code = cli_run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("k", [1, 2, 3])
def test_deterministic_decompose_matches_golden(k, capsys):
    code, out, _ = run(["decompose", system_path(f"example{k}.sys"), "--deterministic"], capsys)
    assert code == EXIT_OK
    with open(system_path(f"example{k}.golden.json"), encoding="utf-8") as fh:
        assert out == fh.read()


def test_example1_json_has_two_chains(capsys):
    _, out, _ = run(["decompose", system_path("example1.sys"), "--deterministic"], capsys)
    doc = json.loads(out)
    assert doc["format"] == 1
    assert sorted(c["polys"] for c in doc["chains"]) == [["x1^2 + x1*x2"], ["x2"]]
    assert "random_log" in doc and "probability_report" in doc


def test_decompose_then_verify(tmp_path, capsys):
    out = tmp_path / "example3.result"
    code, _, _ = run(["decompose", system_path("example3.sys"), "--seed", "7", "--out", str(out)], capsys)
    assert code == EXIT_OK
    code, text, _ = run(["verify", str(out), system_path("example3.sys")], capsys)
    assert code == EXIT_OK
    assert json.loads(text)["ok"] is True
    code, text, _ = run(["verify", str(out), system_path("example3.sys"), "--text", "--samples", "10"], capsys)
    assert code == EXIT_OK and text.startswith("verification: OK")


def test_verify_failure_exit_code(tmp_path, capsys):
    with open(system_path("example1.golden.json"), encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["chains"] = [c for c in doc["chains"] if c["polys"] != ["x2"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, text, _ = run(["verify", str(bad), system_path("example1.sys")], capsys)
    assert code == EXIT_VERIFY_FAILED
    assert json.loads(text)["cover"]["inclusion"]["ok"] is False


def test_verify_checks_variables_and_samples(tmp_path, capsys):
    other = tmp_path / "other.sys"
    other.write_text("vars a b\na*b\n")
    golden = system_path("example1.golden.json")
    assert run(["verify", golden, str(other)], capsys)[0] == EXIT_USAGE
    code, _, err = run(["verify", golden, system_path("example1.sys"), "--samples", "5"], capsys)
    assert code == EXIT_USAGE and "at least 10" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(["decompose", system_path("example1.sys"), "--bogus"], capsys)
    assert code == EXIT_USAGE
    assert "usage:" in err


def test_missing_subcommand(capsys):
    assert run([], capsys)[0] == EXIT_USAGE


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.sys"
    bad.write_text("vars x\nx + y\n")
    code, _, err = run(["decompose", str(bad)], capsys)
    assert code == EXIT_USAGE
    assert "line 2, col 5" in err


def test_deterministic_requires_override(tmp_path, capsys):
    f = tmp_path / "plain.sys"
    f.write_text("vars x1 x2\nx1*x2\n")
    code, _, err = run(["decompose", str(f), "--deterministic"], capsys)
    assert code == EXIT_USAGE and "override" in err


def test_wrong_provider_is_usage_error(capsys):
    code, _, _ = run(["decompose", system_path("example3.sys"), "--provider", "hypersurface"], capsys)
    assert code == EXIT_USAGE


def test_small_gamma_is_algorithmic_failure(tmp_path, capsys):
    # every alpha in {0, 1}^2 is a zero of x1*(x1 - 1)*x2
    f = tmp_path / "tiny.sys"
    f.write_text("vars x1 x2\nx1*(x1-1)*x2\n")
    code, _, err = run(["decompose", str(f), "--gamma-size", "2"], capsys)
    assert code == EXIT_ALGORITHM
    assert "algorithm failure" in err


def test_resultant_subcommand(capsys):
    code, out, _ = run(["resultant", "x^2 - y", "x*y - 1", "--vars", "x,y", "--elim", "x"], capsys)
    assert code == EXIT_OK
    assert out.strip() == "-y^3 + 1"
    code, out, _ = run(["resultant", "x^2 - y", "x*y - 1", "--vars", "x,y", "--elim", "x", "--method", "canny"], capsys)
    assert code == EXIT_OK and out.strip() == "y^3 - 1"
    assert run(["resultant", "x", "--vars", "x", "--elim", "x"], capsys)[0] == EXIT_USAGE


def test_lift_demo(capsys):
    code, out, _ = run(["lift-demo"], capsys)
    assert code == EXIT_OK
    assert "t^1: 1/2" in out and "t^2: -1/8" in out and "t^7: 33/2048" in out
    assert "1 / (y)" in out
    assert run(["lift-demo", "--center", "2"], capsys)[0] == EXIT_USAGE


def test_seed_42_byte_identical(capsys):
    a = run(["decompose", system_path("example3.sys"), "--seed", "42"], capsys)[1]
    b = run(["decompose", system_path("example3.sys"), "--seed", "42"], capsys)[1]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tridecomp.cli", "decompose", system_path("example1.sys"), "--deterministic"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["format"] == 1
