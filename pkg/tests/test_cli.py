from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from localner.cli import RunConfig, cmd_run, main

GOLDEN = Path(__file__).parent / "golden"


def resource_args(resources, dicts=None, taxonomy=None, grammars=None):
    d, t, g = resources
    args = []
    for p in dicts or d:
        args += ["--dict", str(p)]
    args += ["--taxonomy", str(taxonomy or t)]
    for p in grammars or g:
        args += ["--grammar", str(p)]
    return args


def test_check_clean(resources, capsys):
    assert main(["check", *resource_args(resources)]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_check_unknown_type(resources, tmp_path, capsys):
    bad = tmp_path / "bad.grm"
    bad.write_text("@graph X\n# orbit\n'Orbite' <PRE> -> Location.Planète\n", encoding="utf-8")
    assert main(["check", *resource_args(resources, grammars=[bad])]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    assert err[0].startswith(f"{bad}:3:") and "UnknownType" in err[0]


def test_check_malformed_dictionary(resources, tmp_path, capsys):
    src = resources[0][0].read_text(encoding="utf-8").splitlines()
    src.insert(4, "pas de point ici")
    bad = tmp_path / "general.dic"
    bad.write_text("\n".join(src) + "\n", encoding="utf-8")
    assert main(["check", *resource_args(resources, dicts=[bad, *resources[0][1:]])]) == 1
    err = capsys.readouterr().err
    assert f"{bad}:5: MalformedLine" in err


def test_check_reports_every_problem(resources, tmp_path, capsys):
    dic = tmp_path / "a.dic"
    dic.write_text("x\ny\n", encoding="utf-8")
    assert main(["check", *resource_args(resources, dicts=[dic])]) == 1
    assert len(capsys.readouterr().err.strip().splitlines()) == 2


def test_missing_file(resources, tmp_path, capsys):
    assert main(["check", *resource_args(resources, taxonomy=tmp_path / "nope.cfg")]) == 1
    assert "nope.cfg" in capsys.readouterr().err


def test_usage_errors(resources, capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--taxonomy", "t.cfg"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["run", *resource_args(resources), "--mode", "all"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["run", *resource_args(resources), "--mode", "xml"])
    assert info.value.code == 2


def test_golden_all_mode(resources, tmp_path):
    out = tmp_path / "out"
    args = ["run", *resource_args(resources), "--mode", "all", "--keep-unrecognized", "--out", str(out)]
    assert main([*args, str(GOLDEN / "corpus.txt")]) == 0
    for name in ("inline.txt", "fiches.jsonl", "stats.txt"):
        assert (out / name).read_bytes() == (GOLDEN / "corpus" / name).read_bytes(), name


@pytest.mark.parametrize("name", ["vivendi", "hugues", "orsay_org", "orsay_loc"])
def test_golden_fiches(resources, tmp_path, name):
    out = tmp_path / "f.jsonl"
    assert main(["run", *resource_args(resources), "--mode", "fiches", "--out", str(out),
                 str(GOLDEN / f"{name}.txt")]) == 0
    assert out.read_bytes() == (GOLDEN / f"{name}.jsonl").read_bytes()


def test_stdin_and_stdout(resources):
    proc = subprocess.run(
        [sys.executable, "-m", "localner", "run", *resource_args(resources)],
        input="Le groupe Vivendi prend le contrôle.\r\n".encode(),
        capture_output=True,
        check=True,
    )
    assert proc.stdout == "Le groupe {type=Organization}Vivendi{/} prend le contrôle.\r\n".encode()


def test_stats_mode_stdout(resources):
    proc = subprocess.run(
        [sys.executable, "-m", "localner", "run", *resource_args(resources), "--mode", "stats"],
        input=b"Laurent Gbagbo est venu. Hier, Gbagbo a dit.",
        capture_output=True,
        check=True,
    )
    assert b"Person 1 1 2\n" in proc.stdout


def test_bad_input_encoding(resources, tmp_path):
    p = tmp_path / "latin1.txt"
    p.write_bytes("café".encode("latin-1"))
    d, t, g = resources
    assert cmd_run(RunConfig(d, t, g, input_path=p)) == 1


def test_deterministic_runs(resources, tmp_path):
    d, t, g = resources
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert cmd_run(RunConfig(d, t, g, GOLDEN / "corpus.txt", "all", True, out)) == 0
        outs.append([(out / n).read_bytes() for n in ("inline.txt", "fiches.jsonl", "stats.txt")])
    assert outs[0] == outs[1]
