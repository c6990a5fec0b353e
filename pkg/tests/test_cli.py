import json
import subprocess
import sys

import pytest

from tetra.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_words_classes(capsys):
    code, out, _ = run(capsys, "words", "--n", "4", "--classes", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["sections"]["class_count"] == 8 and len(data["sections"]["classes"]) == 8


def test_verify_very_small_passes(capsys):
    code, out, _ = run(capsys, "verify", "--transform", "very_small")
    assert code == 0 and "PASS" in out.upper()


def test_verify_smaller2_certify_reports_unconstrained(capsys):
    code, out, _ = run(capsys, "verify", "--transform", "smaller2", "--certify", "10", "--seed", "7", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["sections"]["certify"]["passed"] == 10
    assert "a4pp" in json.dumps(data["sections"])


def test_json_is_byte_stable(capsys):
    argv = ("verify", "--transform", "smaller2", "--certify", "3", "--json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--transform", "nope"),
        ("verify", "--criterion", "17"),
        ("frobnicate",),
        ("words", "--n", "x"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_literal_failure_exits_1(capsys):
    code, out, _ = run(capsys, "verify", "--criterion", "7")
    assert code == 1
    assert "partial" in out.lower()


def test_criterion_pass_exits_0(capsys):
    code, _, _ = run(capsys, "verify", "--criterion", "1")
    assert code == 0


def test_failed_identity_exits_1(tmp_path, capsys):
    f = tmp_path / "bad.tf"
    f.write_text("name: bad\nwidth: 1\nblocks: 3\ninputs: p, q, r\nfree:\nout[1] = r\nout[2] = p*r - q\nout[3] = p\n")
    code, _, _ = run(capsys, "transform-check", "--transform-file", str(f), "--model", "a")
    assert code == 1
    f.write_text(f.read_text().replace("p*r - q", "p*r + q"))
    code, _, _ = run(capsys, "transform-check", "--transform-file", str(f), "--model", "a")
    assert code == 0


def test_emit_schema_and_display_frame(tmp_path, capsys):
    internal, display = tmp_path / "i.json", tmp_path / "d.json"
    run(capsys, "verify", "--transform", "lusztig", "--emit", str(internal))
    run(capsys, "verify", "--transform", "lusztig", "--frame", "display", "--emit", str(display))
    ti, td = json.loads(internal.read_text()), json.loads(display.read_text())
    assert isinstance(ti, list) and len(ti) == 2
    for tr in ti:
        assert set(tr) == {"transform", "word_sequence", "states"}
        for s in tr["states"]:
            assert set(s) == {"move", "word", "blocks", "frees"}
    assert ti[0]["states"][1]["move"] == "R(1)"
    assert td[0]["states"][1]["move"] == "R(4)"
    assert td[0]["states"][0]["word"] == ti[0]["states"][0]["word"][::-1]


def test_emit_free_names(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "verify", "--transform", "smaller2", "--emit", str(path))
    frees = json.loads(path.read_text())[0]["states"][1]["frees"]
    assert frees == [{"name": "u1", "paper_name": "a1p"}]


def test_chain_file(tmp_path, capsys):
    f = tmp_path / "chains.txt"
    f.write_text("121321 R(1) R(3) L(2) L(5) R(3) R(1) L(3)\n121321 L(3) R(4) R(2) L(4) L(1) R(2) R(4)\n")
    code, _, _ = run(capsys, "verify", "--transform", "very_small", "--chain-file", str(f))
    assert code == 0
    f.write_text("121321 R(2)\n121321 L(3)\n")
    code, _, _ = run(capsys, "verify", "--transform", "very_small", "--chain-file", str(f))
    assert code != 0


def test_evolve_and_wronskian(capsys):
    code, out, _ = run(capsys, "evolve", "--n", "3", "--prefixes", "--json")
    assert code == 0 and json.loads(out)["command"] == "evolve"
    code, _, _ = run(capsys, "wronskian", "--r", "3", "--word", "12", "--symbolic-a")
    assert code == 0
    code, out, _ = run(capsys, "wronskian", "--r", "3", "--word", "12", "--convention", "printed")
    assert code == 1


def test_transform_check_builtin(capsys):
    code, out, _ = run(capsys, "transform-check", "--transform", "lusztig", "--json")
    assert code == 0
    assert all(c["passed"] for c in json.loads(out)["checks"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tetra", "words", "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout
