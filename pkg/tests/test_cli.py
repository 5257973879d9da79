import json
import subprocess
import sys

import pytest

from nu_forge import lab
from nu_forge.cli import main
from nu_forge.report import canonical_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_c2(capsys):
    code, out, _ = run(capsys, "build", "--group", "C2", "--format", "json")
    assert code == 0
    orders = json.loads(out)["groups"][0]["orders"]
    assert orders["nu"] == 8 and orders["upsilon"] == 2


def test_build_trivial(capsys):
    code, out, _ = run(capsys, "build", "--group", "trivial", "--format", "json")
    assert code == 0
    assert set(json.loads(out)["groups"][0]["orders"].values()) == {1}


def test_json_round_trip(capsys):
    code, out, _ = run(capsys, "verify", "--group", "S3", "--format", "json")
    assert code == 0
    assert canonical_json(json.loads(out)) == out

    def values(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from values(v)
        elif isinstance(x, list):
            for v in x:
                yield from values(v)
        else:
            yield x

    assert not any(isinstance(v, float) for v in values(json.loads(out)))


def test_verify_selected(capsys):
    code, out, _ = run(capsys, "verify", "--group", "S3", "--check", "lemma21", "--format", "json")
    ids = [c["check_id"] for c in json.loads(out)["groups"][0]["checks"]]
    assert code == 0 and ids == [f"lemma21.{i}" for i in ("i", "ii", "iii", "iv", "v")]
    code, out, _ = run(capsys, "verify", "--group", "S3", "--check", "lemma21.iii,bfc",
                       "--format", "json")
    ids = [c["check_id"] for c in json.loads(out)["groups"][0]["checks"]]
    assert code == 0 and ids == ["lemma21.iii", "bfc"]


def test_failure_exit_code(capsys, monkeypatch):
    arity, (lhs, rhs) = lab._BASIC["iv"]
    monkeypatch.setitem(lab._BASIC, "iv", (arity, [lhs, lab._inv(rhs)]))
    code, out, err = run(capsys, "verify", "--group", "S3", "--check", "lemma21")
    assert code == 1 and "S3:lemma21.iv" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--group", "S3", "--check", "nosuch"],
    ["build", "--group", "Z7"],
    ["build", "--cayley", "/nonexistent/g.tbl"],
    ["build"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_cayley_file(capsys, tmp_path):
    f = tmp_path / "g.tbl"
    f.write_text("order: 2\n0 1\n1 1\n")
    code, _, err = run(capsys, "build", "--cayley", str(f))
    assert code == 2 and "Latin" in err


def test_resource_limit(capsys):
    assert run(capsys, "build", "--group", "D8", "--max-cosets", "100")[0] == 3
    assert run(capsys, "build", "--group", "S4", "--max-order", "12")[0] == 3


def test_file_inputs(capsys, tmp_path):
    pres = tmp_path / "klein.pres"
    pres.write_text("gens: a, b\nrel: a^2\nrel: b^2\nrel: (ab)^2\n")
    perms = tmp_path / "s3.perm"
    perms.write_text("(0 1)\n(0 1 2)\n")
    tbl = tmp_path / "c3.tbl"
    tbl.write_text("order: 3\n0 1 2\n1 2 0\n2 0 1\n")
    for flag, path, ups in (("--presentation", pres, 16), ("--perms", perms, 6), ("--cayley", tbl, 3)):
        code, out, _ = run(capsys, "build", flag, str(path), "--format", "json")
        assert code == 0
        assert json.loads(out)["groups"][0]["orders"]["upsilon"] == ups


@pytest.mark.parametrize("group,which,orders", [("D8", "lcs", [8, 2, 1]), ("S3", "ucs", [1, 1]),
                                                ("C6", "derived", [6, 1])])
def test_series(capsys, group, which, orders):
    code, out, _ = run(capsys, "series", "--group", group, "--which", which, "--format", "json")
    assert code == 0
    assert json.loads(out)["groups"][0]["series"]["G"]["orders"] == orders


def test_deterministic_and_parallel(capsys):
    argv = ["verify", "--group", "D8", "--check", "lemma21,lemma22ii", "--format", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    code, out, _ = run(capsys, "build", "--all", "--jobs", "2", "--format", "json")
    labels = [g["group"]["label"] for g in json.loads(out)["groups"]]
    assert code == 0 and labels[:3] == ["trivial", "C2", "C3"] and len(labels) == 13


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--group", "C2", "--check", "order,lemma22v")
    assert code == 0 and "2/2 checks passed" in out and "|Upsilon|" in out


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "nu_forge.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "nu-forge" in out.stdout
