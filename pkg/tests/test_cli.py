import json
import subprocess
import sys

import pytest

from shiftequiv import __version__
from shiftequiv.cli import COMMANDS, canonical_json, certificate_roundtrip, main, run_command

from cli_suite import cases, write_inputs


@pytest.fixture(scope="module")
def paths(tmp_path_factory):
    return write_inputs(tmp_path_factory.mktemp("inputs"))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_suite_covers_every_command(paths):
    assert {argv[0] for argv, _ in cases(paths)} >= set(COMMANDS)


@pytest.mark.parametrize("index", range(27))
def test_exit_codes(paths, index, capsys):
    argv, expected = cases(paths)[index]
    code, cert, err = run(argv, capsys)
    assert code == expected, err
    if expected == 2:
        assert cert is None and err.startswith("error") or "usage" in err
    else:
        assert cert["command"] == argv[0] and cert["tool_version"] == __version__
        assert cert["seed"] == 0


def test_verify_se_on_the_worked_pair(paths, capsys):
    code, cert, _ = run(["verify-se", "--pair", paths["pair"], "--witness", paths["se"]], capsys)
    assert code == 0 and cert["result"] == {"verified": True, "lag": 1}
    assert ["SA == BS", True] in cert["checks"]


def test_invariants_two_vs_four(paths, capsys):
    code, cert, _ = run(["invariants", "--pair", paths["two_vs_four"]], capsys)
    assert code == 1 and cert["result"]["verdict"] == "NotSE"
    assert "t - 2 vs t - 4" in cert["result"]["reasons"][0]


def test_input_errors_name_the_field(paths, capsys):
    _, _, err = run(["verify-se", "--pair", paths["not_square"], "--witness", paths["se"]], capsys)
    assert "pair.A" in err and "square" in err
    _, _, err = run(["verify-se", "--pair", paths["negative"], "--witness", paths["se"]], capsys)
    assert "pair.A.entries[0][1]" in err
    _, _, err = run(["verify-se", "--pair", paths["broken"], "--witness", paths["se"]], capsys)
    assert "pair" in err and "line 2" in err


def test_found_results_embed_passing_checks(paths, capsys):
    for argv, expected in cases(paths):
        if expected != 0 or not argv[0].startswith("search"):
            continue
        _, cert, _ = run(argv, capsys)
        assert cert["result"]["status"] == "found"
        assert cert["checks"] and all(ok for _, ok in cert["checks"])


def test_budget_exceeded_exits_one(paths, capsys):
    code, cert, _ = run(["search-sse", "--pair", paths["two_away"], "--budget", paths["tiny_budget"]],
                        capsys)
    assert code == 1 and cert["result"]["status"] == "budget-exceeded"


def test_rep_dump_and_twist(paths, capsys):
    _, cert, _ = run(["rep-build", "--witness", paths["cse"]], capsys)
    rep = cert["result"]["representation"]
    assert rep["depth"] == 6 and rep["lag"] == 1
    assert all({"label", "angle", "consumption", "assignments"} <= set(op) for op in rep["operators"])
    _, cert, _ = run(["rep-twist", "--witness", paths["cse"], "--angle", "1/6"], capsys)
    angles = {op["label"][:2]: op["angle"] for op in cert["result"]["representation"]["operators"]}
    assert angles["S["] == "1/6" and angles["P["] == "0/1"


def test_out_file_matches_stdout(paths, tmp_path, capsys):
    out = tmp_path / "cert.json"
    main(["verify-se", "--pair", paths["pair"], "--witness", paths["se"], "--out", str(out)])
    printed = capsys.readouterr().out
    assert out.read_text() == printed


def test_progress_goes_to_stderr(paths, capsys):
    code, cert, err = run(["search-sse", "--pair", paths["two_away"], "--progress"], capsys)
    events = [json.loads(line) for line in err.splitlines()]
    assert code == 0 and events[-1]["event"] == "found"


def test_certificate_roundtrip(paths, capsys):
    for argv, expected in cases(paths):
        if expected == 2:
            continue
        _, cert, _ = run(argv, capsys)
        assert certificate_roundtrip(cert)
        assert certificate_roundtrip(cert, workers=4)


def test_tampered_certificate_fails_roundtrip(paths, capsys):
    _, cert, _ = run(["verify-se", "--pair", paths["pair"], "--witness", paths["se"]], capsys)
    cert["result"]["verified"] = False
    assert not certificate_roundtrip(cert)
    _, cert, _ = run(["search-se", "--pair", paths["pair"]], capsys)
    cert["result"]["witness"]["R"]["entries"][0][0] = "2"
    assert not certificate_roundtrip(cert)


def test_version_mismatch_warns_but_compares(paths, capsys):
    _, cert, _ = run(["verify-se", "--pair", paths["pair"], "--witness", paths["se"]], capsys)
    cert["tool_version"] = "0.0.0"
    with pytest.warns(UserWarning, match="version"):
        assert certificate_roundtrip(cert)


def test_same_inputs_same_bytes(paths):
    _, first = run_command("search-cse", {"pair": json.load(open(paths["pair"])),
                                          "witnesses": [json.load(open(paths["se_lag2"]))]})
    _, second = run_command("search-cse", {"pair": json.load(open(paths["pair"])),
                                           "witnesses": [json.load(open(paths["se_lag2"]))]})
    assert canonical_json(first) == canonical_json(second)


def test_module_entry_point(paths):
    proc = subprocess.run([sys.executable, "-m", "shiftequiv", "verify-se", "--pair", paths["pair"],
                           "--witness", paths["se"]], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verified"] is True
