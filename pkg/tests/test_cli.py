import json

import pytest

from revshor.cli import main
from revshor.netlist import parse_netlist


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_adder(tmp_path, capsys):
    path = tmp_path / "adder4.qnet"
    code, _, _ = run(capsys, "build", "adder", "--w", "4", "-o", str(path))
    assert code == 0
    assert len(parse_netlist(path.read_text()).gates) == 25


def test_build_modexp_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.qnet", tmp_path / "b.qnet"
    assert run(capsys, "build", "modexp", "--N", "15", "--A", "7", "-o", str(a))[0] == 0
    assert run(capsys, "build", "modexp", "--N", "15", "--A", "7", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert parse_netlist(a.read_text()).width == 26


def test_build_pipeline_stdout(capsys):
    code, out, _ = run(capsys, "build", "pipeline", "--N", "15", "--A", "7")
    assert code == 0 and "# measure Y" in out


def test_build_unknown(capsys):
    code, _, err = run(capsys, "build", "nosuch")
    assert code == 2 and "unknown block" in err


def test_run_outputs(capsys):
    assert run(capsys, "run", "mod_add", "--w", "4", "A=3", "B=4", "N=5")[1].strip() == "A=2 B=4 N=5 anc=0"
    assert "flag=1" in run(capsys, "run", "geq", "--w", "4", "A=5", "B=5")[1].split()
    assert "P=13" in run(capsys, "run", "modexp", "--N", "15", "--A", "7", "Y=3")[1].split()


def test_run_precondition(capsys):
    code, _, err = run(capsys, "run", "mod_reduce", "--w", "4", "A=30", "N=7")
    assert code == 3 and "A >= 2N" in err


def test_run_bad_assignment(capsys):
    assert run(capsys, "run", "adder", "--w", "4", "A=x")[0] == 2
    assert run(capsys, "run", "adder", "--w", "4", "A")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "adder", "--w", "4", "--exhaustive")
    assert code == 0 and "PASS" in out and "256 cases" in out
    code, out, _ = run(capsys, "verify", "mod_add", "--w", "4", "--exhaustive", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["cases"] == sum(N * N for N in range(2, 8))
    assert run(capsys, "verify", "adder", "--w", "9", "--exhaustive")[0] == 2
    code, out, _ = run(capsys, "verify", "adder", "--w", "9", "--samples", "50", "--seed", "2")
    assert code == 0 and "50 cases" in out


def test_verify_mismatch_exit(capsys, monkeypatch):
    from revshor import blocks

    spec = blocks.BLOCKS["inc"]
    broken = blocks.BlockSpec(spec.name, spec.inputs, spec.build, lambda w, i, p: {"B": i["B"]},
                              spec.check, spec.cases)
    monkeypatch.setitem(blocks.BLOCKS, "inc", broken)
    code, out, _ = run(capsys, "verify", "inc", "--w", "3")
    assert code == 4 and "counterexample" in out


def test_resources(capsys):
    code, out, _ = run(capsys, "resources", "adder", "--w", "2..8", "--json")
    data = json.loads(out)
    assert [r["total"] for r in data["rows"]] == [6 * w + 1 for w in range(2, 9)]
    assert set(data["rows"][0]) == {"block", "n", "width", "counts", "total", "depth"}
    assert data["reference"]["implementation"] == "Current Work"
    code, out, _ = run(capsys, "resources", "modexp", "--n", "3..8", "--fit", "--json")
    assert 2.6 <= json.loads(out)["slope"] <= 3.4
    code, out, _ = run(capsys, "resources", "modexp", "--n", "4", "--json")
    assert json.loads(out)["rows"][0]["width"] == 26
    assert run(capsys, "resources", "nosuch", "--w", "3")[0] == 2


def test_period(capsys):
    code, out, _ = run(capsys, "period", "15", "7", "--seed", "1", "--shots", "100", "--json")
    data = json.loads(out)
    assert code == 0 and set(data["histogram"]) <= {"0", "8", "16", "24"}
    assert sum(data["histogram"].values()) == 100
    again = run(capsys, "period", "15", "7", "--seed", "1", "--shots", "100", "--json")[1]
    assert again == out
    assert run(capsys, "period", "15", "5")[0] == 2


def test_factor(capsys):
    assert run(capsys, "factor", "15", "--seed", "1")[1].strip() == "3 x 5"
    assert run(capsys, "factor", "9", "--seed", "1")[1].strip() == "3 x 3"
    code, out, _ = run(capsys, "factor", "21", "--seed", "1", "--json")
    data = json.loads(out)
    assert {"N", "A", "r", "factors", "attempts"} <= set(data) and data["factors"] == [3, 7]
    assert run(capsys, "factor", "13")[0] == 2
    assert run(capsys, "factor", "70000")[0] == 2


def test_usage_error_exit(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run"])
    assert info.value.code == 2
