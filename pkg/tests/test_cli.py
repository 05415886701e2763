import json
import subprocess
import sys

import pytest

from qsphere.cli import main, run


def _report(argv):
    code, text = run(argv)
    return code, json.loads(text)


def _strip_time(text):
    r = json.loads(text)
    r.pop("wall_time_s")
    return json.dumps(r, sort_keys=True)


def test_classify_c2_reports_two_solutions():
    code, r = _report(["classify", "--c", "preset:c2"])
    assert code == 0
    assert r["payload"]["count"] == 2
    sols = r["payload"]["solutions"]
    assert [s["index"] for s in sols] == [3, 4]
    for s in sols:
        assert {"family", "conditions", "locus", "dims", "equivariant", "index"} <= set(s)
        assert s["equivariant"] and s["dims"]["right"]["value"] == 2


def test_classify_generic_reports_zero():
    code, r = _report(["classify", "--c", "1"])
    assert code == 0
    assert r["payload"]["count"] == 0


def test_report_fields():
    code, r = _report(["verify-hopf", "--degree", "2"])
    assert code == 0
    for key in ("schema_version", "command", "options", "convention_hash", "degree", "payload",
                "counters", "wall_time_s"):
        assert key in r
    assert r["counters"]["failed"] == 0 and r["authoritative"]


def test_reports_deterministic_apart_from_wall_time():
    argv = ["verify-podles", "--c", "preset:c0m"]
    a, b = run(argv)[1], run(argv)[1]
    assert _strip_time(a) == _strip_time(b)


def test_specialize_is_labelled():
    code, r = _report(["verify-podles", "--c", "0", "--specialize", "p=2"])
    assert code == 0
    assert not r["authoritative"]
    assert any("NON-AUTHORITATIVE" in n for n in r["notes"])


def test_markdown_format():
    code, text = run(["verify-rform", "--degree", "2", "--format", "markdown"])
    assert code == 0
    assert text.startswith("# qsphere verify-rform")
    assert "| check | result |" in text


def test_rho_lambda_resolution():
    # rho, lambda of the c = 0 preset with alpha = (0, 1, 0): lambda = 1 - q^2, rho = 1
    code, r = _report(["verify-podles", "--rho", "1", "--lambda", "1 - q^2"])
    assert code == 0
    assert r["payload"]["embedding"]["alpha"] == ["0", "1", "0"]


@pytest.mark.parametrize("argv", [
    ["classify", "--c", "1", "--unknown"],
    ["classify"],
    ["classify", "--c", "1", "--rho", "1", "--lambda", "1"],
    ["classify", "--rho", "1"],
    ["classify", "--c", "(("],
    ["classify", "--c", "1", "--alpha", "1,1"],
    ["classify", "--c", "1", "--alpha", "5,1,1"],
    ["construct", "--c", "0"],
    ["construct", "--preset", "sol2"],
    ["solution", "--preset", "c2-i"],
    ["verify-hopf", "--degree", "9"],
    ["verify-hopf", "--specialize", "p=1"],
    ["verify-hopf", "--specialize", "q=2"],
    ["dims", "--preset", "sol5", "--c", "0"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_roundtrip_c2_witness():
    code, r = _report(["roundtrip", "--preset", "c2-i", "--degree", "3"])
    assert code == 0
    names = {c["name"]: c["passed"] for c in r["checks"]}
    assert names["opposite-side ideal is B+"]


def test_solution_command_specialized():
    code, r = _report(["solution", "--preset", "sol7", "--specialize", "p=2"])
    assert code == 0
    assert r["payload"]["dims"]["left"]["value"] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qsphere", "verify-hopf", "--degree", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["counters"]["failed"] == 0
