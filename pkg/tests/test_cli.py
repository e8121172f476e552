import csv
import io
import json
import subprocess
import sys

import pytest

from polyzeta.cli import EXIT_OK, EXIT_REFUSED, EXIT_USAGE, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def test_analyze_example():
    code, js, _ = run_json("analyze", "x1^2+x2^3", "-n", "2", "--max-k", "3")
    assert code == EXIT_OK
    assert js["schema"] == 1
    assert js["poles"]["holomorphy_bound"] == "-5/12"
    assert "-5/12" in [c["value"] for c in js["poles"]["candidates"]]


def test_poles_example():
    code, js, _ = run_json("poles", "x1*x2", "-n", "2")
    top = js["poles"]["candidates"][0]
    assert code == EXIT_OK and top["value"] == "-1/2" and top["order_bound"] == 2
    code, text, _ = run("poles", "x1*x2", "-n", "2")
    assert "-1/2  order <= 2" in text


def test_nondeg_degenerate_exits_2_with_witness():
    code, js, err = run_json("nondeg", "(x1+x2)^2", "-n", "2")
    assert code == EXIT_REFUSED
    assert js["nondeg"]["overall"] == "Degenerate"
    (bad,) = [F for F in js["nondeg"]["faces"] if F["status"] == "Degenerate"]
    assert len(bad["witness"]) == 2
    assert f"face {bad['face']}" in err


def test_poles_refuses_degenerate_then_force_tags_output():
    code, js, err = run_json("poles", "(x1+x2)^2", "-n", "2")
    assert code == EXIT_REFUSED and "refused" in js and "face" in err
    code, js, _ = run_json("poles", "(x1+x2)^2", "-n", "2", "--force")
    assert code == EXIT_OK and js["poles"]["hypothesis"] == "hypothesis-unverified"


def test_nonvanishing_at_origin_is_refused():
    code, _, err = run("poles", "1 + x1", "-n", "1")
    assert code == EXIT_REFUSED and "refused" in err


def test_parse_error_reports_position():
    code, out, err = run("np", "x1^2+", "-n", "2")
    assert code == EXIT_USAGE and out == ""
    assert "position 5" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus", "x1", "-n", "1"],
        ["np", "x1"],
        ["np", "x1", "-n", "7"],
        ["poles", "x1", "-n", "1", "--max-k", "10001"],
        ["nondeg", "x1", "-n", "1", "--tol", "0.5"],
        ["nondeg", "x1", "-n", "1", "--tol", "0"],
        ["np", "x1", "-n", "1", "--format", "csv"],
        ["zeta", "x1", "-n", "1", "--probe", "--format", "csv"],
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_unsupported_quadrature_is_an_error():
    code, _, err = run("zeta", "x1+x2+x3", "-n", "3")
    assert code == EXIT_USAGE and "n <= 2" in err


def test_analyze_embeds_sub_reports():
    args = ["x1^2+x2^3", "-n", "2", "--max-k", "4", "--seed", "3"]
    _, full, _ = run_json("analyze", *args)
    for cmd in ("np", "fan", "nondeg", "poles"):
        extra = {"nondeg": ["--seed", "3"], "poles": ["--max-k", "4", "--seed", "3"]}.get(cmd, [])
        _, sub, _ = run_json(cmd, *args[:3], *extra)
        assert full[cmd] == sub[cmd]


@pytest.mark.parametrize("cmd", ["np", "fan", "nondeg", "poles", "analyze"])
def test_json_is_byte_identical(cmd):
    argv = [cmd, "x1^2*x2 + x1*x2^3 + x2^5", "-n", "2", "--format", "json"]
    assert run(*argv)[1] == run(*argv)[1]


def test_seed_env_fallback(monkeypatch):
    argv = ["nondeg", "(x1+x2+x3)^2 + x1^4", "-n", "3", "--format", "json"]
    monkeypatch.setenv("POLYZETA_SEED", "11")
    from_env = run(*argv)
    explicit = run(*argv, "--seed", "11")
    assert from_env == explicit
    monkeypatch.setenv("POLYZETA_SEED", "eleven")
    assert run(*argv)[0] == EXIT_USAGE


def test_naive_flag():
    _, js, _ = run_json("poles", "x1^2+x2^3", "-n", "2", "--max-k", "2", "--naive")
    assert js["poles"]["kind"] == "naive"
    assert {"-1/2", "-2/3"} <= {c["value"] for c in js["poles"]["candidates"]}


def test_zeta_outputs():
    code, text, _ = run("zeta", "x1", "-n", "1", "--s", "1", "--s", "0.5+1i", "--format", "csv", "--bump-p", "0")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == EXIT_OK and len(rows) == 2
    assert abs(float(rows[0]["value_re"]) - 3.141592653589793 / 2) < 1e-6
    code, js, _ = run_json("zeta", "x1^2+x2^3", "-n", "2", "--probe", "--s", "-0.3", "--grid", "16", "16")
    assert code == EXIT_OK and js["probe"]["stable"]


def test_text_reports_render():
    for cmd in ("np", "fan", "nondeg", "analyze"):
        code, text, _ = run(cmd, "x1^2+x2^3", "-n", "2", "--max-k", "2") if cmd == "analyze" else run(cmd, "x1^2+x2^3", "-n", "2")
        assert code == EXIT_OK and text.strip()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "polyzeta", "np", "x1^2+x2^3", "-n", "2", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["np"]["vertices"] == [[0, 3], [2, 0]]
