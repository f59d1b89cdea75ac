import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from homotopical.cli import main


def run(*args):
    return main([str(a) for a in args])


def test_validate(capsys):
    assert run("validate", FIXTURES / "t1.cat.json") == 0
    assert run("validate", FIXTURES / "p2-bad-unit.cat.json") == 1
    assert "UnitLaw" in capsys.readouterr().out


def test_axioms_bad_hat_report(tmp_path):
    out = tmp_path / "r.json"
    assert run("axioms", FIXTURES / "p2.cat.json", FIXTURES / "bad-hat.hs.json", "--report", out) == 1
    rep = json.loads(out.read_text())
    assert rep["axioms"]["status"]["I"] == "fail"
    assert rep["axioms"]["counterexamples"]["I"] == [{"object": "A"}]


def test_axioms_pass_has_witnesses(tmp_path):
    out = tmp_path / "r.json"
    assert run("axioms", FIXTURES / "p2.cat.json", FIXTURES / "p2.hs.json", "--congruence", "--report", out) == 0
    rep = json.loads(out.read_text())
    assert rep["axioms"]["witnesses"]["I"] == {"A": "id_A", "B": "id_B"}
    assert rep["congruence"]["passed"]


def test_report_independent_of_workers(tmp_path):
    outs = []
    for w in (1, 4):
        out = tmp_path / f"r{w}.json"
        run("axioms", FIXTURES / "p2.cat.json", FIXTURES / "bad-hat.hs.json", "--workers", w, "--report", out)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_gen_classes_quotient(tmp_path, capsys):
    prefix = tmp_path / "grp"
    assert run("gen", "grpd-cylinder", FIXTURES / "z2.grpd.json", FIXTURES / "interval.grpd.json", "-o", prefix) == 0
    cat, hs = f"{prefix}.cat.json", f"{prefix}.hs.json"
    assert run("classes", cat, hs, "--hom", "Z2", "Z2") == 0
    assert "C(Z2,Z2): 2 class(es)" in capsys.readouterr().out
    q = tmp_path / "q.json"
    assert run("quotient", cat, hs, "-o", q) == 0
    assert run("validate", q) == 0
    assert run("equiv", cat, hs, "I", "I") == 0


def test_gen_trivial(tmp_path):
    prefix = tmp_path / "p2t"
    assert run("gen", "trivial", FIXTURES / "p2.cat.json", "-o", prefix) == 0
    assert run("axioms", f"{prefix}.cat.json", f"{prefix}.hs.json") == 0


def test_contractible_and_equiv():
    assert run("contractible", FIXTURES / "t1.cat.json", FIXTURES / "t1.hs.json", "*", "*") == 0
    assert run("contractible", FIXTURES / "p2.cat.json", FIXTURES / "p2.hs.json", "A", "B") == 1
    assert run("equiv", FIXTURES / "p2.cat.json", FIXTURES / "p2.hs.json", "A", "B") == 1


def test_banach_commands(tmp_path):
    assert run("banach", "axioms", "--dims", "1,2,3", "--tol", "1e-9") == 0
    assert run("banach", "homotopic", FIXTURES / "u.json", FIXTURES / "v.json") == 0
    assert run("banach", "homotopic", FIXTURES / "u.json", FIXTURES / "v.json", "--phi", FIXTURES / "singular-phi.json") == 1
    assert run("banach", "contractible", "--dim", "3") == 0
    assert run("banach", "contractible", "--phi", FIXTURES / "singular-phi.json") == 1
    out = tmp_path / "h.json"
    run("banach", "homotopic", FIXTURES / "u.json", FIXTURES / "v.json", "--report", out)
    assert json.loads(out.read_text())["H"] == [[0.0, 0.0, 0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]]


@pytest.mark.parametrize(
    "args, needle",
    [
        (["validate", "missing.json"], "missing.json"),
        (["axioms", FIXTURES / "p2.cat.json", FIXTURES / "t1.hs.json"], "t1.hs.json"),
        (["banach", "axioms", "--dims", "1,x"], "--dims"),
        (["banach", "axioms", "--tol", "0"], "--tol"),
        (["banach", "contractible"], "--phi"),
        (["gen", "grpd-cylinder", FIXTURES / "z2.grpd.json", "-o", "/tmp/x", "--budget", "1"], "Z2 -> Z2"),
    ],
)
def test_input_errors_exit_2(args, needle, capsys):
    assert run(*args) == 2
    err = capsys.readouterr().err
    assert needle in err and err.count("\n") == 1


def test_malformed_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cat.json"
    bad.write_text("[1, 2")
    assert run("validate", bad) == 2
    assert "bad.cat.json" in capsys.readouterr().err


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "homotopical", "validate", str(FIXTURES / "t1.cat.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "ok" in proc.stdout
