import json

import pytest

from nfgeom.cli import main

FLAT = "space dim=2\nF2 := y1^2 + x1^2*y2^2\n"


def run(tmp_path, text, *args):
    f = tmp_path / "s.nf"
    f.write_text(text)
    return main(["run", str(f), *args])


def test_ok_text_and_json(tmp_path, capsys):
    assert run(tmp_path, FLAT + "show N[i,-j]\ncheck homogeneity\n") == 0
    assert "N^{x1}_{x2}" in capsys.readouterr().out
    assert run(tmp_path, FLAT + "show N[i,-j]\n", "--format", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"space", "tensors", "branches", "brackets", "checks", "verdicts"}


@pytest.mark.parametrize("argv", [[], ["run"], ["frob"], ["example", "ex9"],
                                  ["run", "/nonexistent/x.nf"]])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as e:
        code = main(argv)
        raise SystemExit(code)
    assert e.value.code == 1


def test_bad_check_numeric_option(tmp_path):
    assert run(tmp_path, FLAT, "--check-numeric", "points=3 bogus=1") == 1


@pytest.mark.parametrize("body, where", [
    ("show N[i,-j\n", ":3:"),
    ("assume y1 << 0\n", ":3:"),
    ("definetensor T[i] = N[i,-j]\n", ":3:"),
    ("show Q[i]\n", ":3:"),
])
def test_parse_and_static_errors_exit_2(tmp_path, capsys, body, where):
    assert run(tmp_path, FLAT + body) == 2
    err = capsys.readouterr().err
    assert where in err and "s.nf" in err


@pytest.mark.parametrize("text", [
    "space dim=2\nF2 := y1^2\nshow N[i,-j]\n",              # degenerate metric
    "space dim=2\nF2 := y1^2 + y2^2\nassume 1/(y1-y1) <> 0\n",  # division by zero
    FLAT + "solve kernel RG\n",                             # kernel needs rank 4
])
def test_math_errors_exit_3(tmp_path, text):
    assert run(tmp_path, text) == 3


def test_failed_check_exit_4(tmp_path, capsys):
    assert run(tmp_path, FLAT + "check symmetry g 1 2 sign=-1\n") == 4
    assert "FAIL" in capsys.readouterr().out


def test_check_numeric_flag_appends_check(tmp_path, capsys):
    assert run(tmp_path, FLAT, "--check-numeric", "points=2 tol=1e-9 seed=4", "--format", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["kind"] == "numeric" and doc["checks"][0]["passed"]


def test_json_is_deterministic(tmp_path, capsys):
    text = FLAT + "show RG[i,-j,-k]\nsolve nullity RC\nbracket (h1, h2)\n"
    outs = []
    for _ in range(2):
        assert run(tmp_path, text, "--format", "json") == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
