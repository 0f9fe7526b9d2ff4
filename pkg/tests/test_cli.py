import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from pel.cli import main

GOLD = resources.files("pel.goldens")


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gold(name):
    return str(GOLD.joinpath(name))


def test_fig2_trace(capsys):
    code, out, _ = run(capsys, "reduce", "--strategy", "full", "--trace", gold("cbv_intro.pel"))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == r"\t.\f.t"
    rules = [line.split(" @ ")[0] for line in lines[:-1]]
    assert rules[0] == "plusArg" and rules[-2:] == ["idem", "boxVoid"]


def test_trace_certify(capsys):
    code, out, _ = run(capsys, "trace", "--certify", gold("cbv_intro.pel"))
    assert code == 0
    lines = out.strip().splitlines()[:-1]
    assert lines[0].endswith("[ok]") and "[n/a]" in lines[1]
    code, out, _ = run(capsys, "trace", "--certify", "--json", gold("cbv_intro.pel"))
    recs = [json.loads(line) for line in out.strip().splitlines()]
    assert recs[0]["certificate"] == "ok" and recs[1]["certificate"] is None
    assert {"rule", "pos", "term"} <= set(recs[0])


def test_dist(capsys):
    code, out, _ = run(capsys, "dist", gold("cbn_intro.pel"))
    assert code == 0
    assert out.splitlines() == ["1/2\t\\t.\\f.f", "1/2\t\\t.\\f.t"]
    code, out, _ = run(capsys, "dist", "--json", gold("cbv_intro.pel"))
    assert [json.loads(line) for line in out.splitlines()] == [{"prob": "1", "term": r"\t.\f.t"}]


def test_typecheck(capsys):
    code, _, err = run(capsys, "typecheck", gold("omega.pel"))
    assert code == 1 and "occurs check" in err
    code, out, _ = run(capsys, "typecheck", "-e", r"\x.\y.x")
    assert code == 0 and out.strip() == "a -> b -> a"
    code, out, _ = run(capsys, "typecheck", "--env", "f : o -> o", "--json", "-e", r"\x.f x")
    assert json.loads(out) == {"type": "o -> o"}


def test_exit_codes(capsys):
    code, _, err = run(capsys, "fmt", "-e", "(x y")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "reduce", "--max-steps", "100", gold("omega.pel"))
    assert code == 1 and "exceeded" in err
    code, _, err = run(capsys, "fmt", "-e", "x +[a] y")
    assert code == 1 and "label" in err
    code, _, err = run(capsys, "check", "--open", "-e", "x +[a] y")
    assert code == 1 and "--theta" in err
    code, _, _ = run(capsys, "fmt", "/nonexistent/file.pel")
    assert code == 2
    code, _, _ = run(capsys, "nosuchcommand")
    assert code == 2
    code, _, err = run(capsys, "test", "nosuchproperty")
    assert code == 2


def test_fmt_idempotent(capsys):
    code, once, _ = run(capsys, "fmt", "-e", r"((\x.(x)) ((y))) (+) (z)")
    code, twice, _ = run(capsys, "fmt", "-e", once)
    assert once == twice
    assert once.strip() == r"!f.((\x.x) y +[f] z)"


def test_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "fmt", stdin=r"(\x.x) y", monkeypatch=monkeypatch)
    assert code == 0 and out.strip() == r"(\x.x) y"


def test_parse_and_check(capsys):
    code, out, _ = run(capsys, "parse", "--json", "-e", "!a.(x +[a] y)")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "check", "--json", "-e", "x (y (+) z)")
    info = json.loads(out)
    assert info["label_closed"] and info["normal_form"] == "N0-normal"
    code, out, _ = run(capsys, "check", "--open", "--theta", "a", "-e", "x +[a] y")
    assert code == 0 and "normal_form: n/a" in out


def test_open_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--open", "--theta", "b,a", "-e", r"(x +[a] y) +[b] z")
    assert code == 0 and out.strip() == "(x +[b] z) +[a] y +[b] z"


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "--cbv", "--open", "-e", r"(\x.f x x) (y (+) z)")
    assert out.splitlines() == ["theta: a", r"(\x.f x x) (y +[a] z)"]
    code, out, _ = run(capsys, "translate", "--cbv", gold("intro.src"))
    assert out.strip().startswith("!a.")
    code, out, _ = run(capsys, "translate", "--cbn", "-e", "x (+) y")
    assert "!" in out
    code, _, _ = run(capsys, "translate", "-e", "!a.(x +[a] y)")
    assert code == 2


def test_test_command(capsys):
    code, out, _ = run(capsys, "test", "roundtrip", "--trials", "5", "--seed", "3")
    assert code == 0 and out.startswith("PASS roundtrip: 5 trials")
    code, out, _ = run(capsys, "test", "perm-sn", "--trials", "5", "--json")
    rec = json.loads(out)
    assert rec["ok"] and rec["trials"] == 5


def test_determinism():
    argv = [sys.executable, "-m", "pel.cli", "trace", gold("cbv_intro.pel")]
    a = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert a == b


@pytest.mark.parametrize("cmd", ["parse", "fmt", "check", "typecheck", "reduce", "trace", "translate", "dist", "test"])
def test_help(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--help")
    assert code == 0 and "usage" in out
