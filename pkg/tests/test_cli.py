import json
from importlib import resources

import jsonschema
import pytest

from propweaken.cli import OUTCOME_NAMES, RunReport, main
from propweaken.formula import Formula
from propweaken.parser import parse_formula

SCHEMA = json.loads(resources.files("propweaken").joinpath("report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_drone(capsys, spec_path):
    code, out, _ = run(capsys, "check", spec_path("drone.wspec"))
    assert code == 0
    assert out.strip() == "well-formed; desired does not hold; critical holds; weakening required"


def test_check_desired_holds(capsys, spec_path):
    code, out, _ = run(capsys, "check", spec_path("desired_holds.wspec"))
    assert (code, out.strip()) == (0, "well-formed; desired holds")


def test_check_parse_error(capsys, spec_path):
    code, _, err = run(capsys, "check", spec_path("missing_section.wspec"))
    assert code == 3
    assert "missing_section.wspec:2:" in err and "MissingSection" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "run", "/nonexistent.wspec")
    assert code == 3


def test_run_drone(capsys, spec_path):
    code, out, _ = run(capsys, "run", spec_path("drone.wspec"))
    assert (code, out.strip()) == (0, "W_L -> L")


def test_run_no_sugar_no_simplify(capsys, spec_path):
    _, out, _ = run(capsys, "run", spec_path("drone.wspec"), "--no-sugar")
    assert out.strip() == "L | !W_L"
    _, out, _ = run(capsys, "run", spec_path("drone.wspec"), "--no-simplify")
    assert out.strip() == "((W_H | W_L) -> L) | !L & (W_H & !W_L)"


def test_run_keep_hidden_trace(capsys, spec_path):
    code, out, _ = run(capsys, "run", spec_path("drone.wspec"), "--keep-hidden", "--trace")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "iteration 0"
    assert lines[1] == "  counterexample: L=0 R_3=1 R_4=0 W_H=1 W_L=0"
    assert lines[2] == "  cube: !L & R_3 & !R_4 & W_H & !W_L"


def test_trace_byte_stable(capsys, spec_path):
    first = run(capsys, "run", spec_path("drone.wspec"), "--trace")[1]
    second = run(capsys, "run", spec_path("drone.wspec"), "--trace")[1]
    assert first == second


@pytest.mark.parametrize(
    "name, code",
    [
        ("drone.wspec", 0),
        ("desired_holds.wspec", 0),
        ("critical_violated.wspec", 1),
        ("not_well_formed.wspec", 2),
        ("missing_section.wspec", 3),
    ],
)
def test_exit_codes(capsys, spec_path, name, code):
    assert run(capsys, "run", spec_path(name))[0] == code


def test_iteration_limit_exit(capsys, tmp_path):
    path = tmp_path / "many.wspec"
    path.write_text("assume: true\ndesired: a & b & c\ncritical: true\n")
    code, _, err = run(capsys, "run", str(path), "--max-iters", "2")
    assert code == 4 and "iteration limit" in err


def test_resource_limit_env(capsys, spec_path, monkeypatch):
    monkeypatch.setenv("WEAKEN_DECISION_CAP", "0")
    code, _, err = run(capsys, "run", spec_path("drone.wspec"))
    assert code == 4 and "resource limit" in err


def test_unsat_assumption_warning(capsys, spec_path):
    code, out, err = run(capsys, "run", spec_path("unsat_assumption.wspec"))
    assert code == 0
    assert "assumption is unsatisfiable" in err
    assert "desired holds" in out


@pytest.mark.parametrize("name", ["drone.wspec", "desired_holds.wspec", "critical_violated.wspec", "not_well_formed.wspec"])
def test_json_report(capsys, spec_path, name):
    _, out, _ = run(capsys, "run", spec_path(name), "--json", "--keep-hidden")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    report = RunReport.from_json(out)
    assert RunReport.from_json(report.to_json()) == report
    for text in filter(None, [report.final, report.final_simplified]):
        assert isinstance(parse_formula(text), Formula.__args__)
    for item in report.iterations:
        parse_formula(item["candidate"])


def test_json_drone_contents(capsys, spec_path):
    _, out, _ = run(capsys, "run", spec_path("drone.wspec"), "--json")
    data = json.loads(out)
    assert data["outcome"] == "weakened"
    assert data["final_simplified"] == "W_L -> L"
    assert data["iterations"][0]["cube"] == {"L": False, "W_H": True, "W_L": False}
    assert set(data) >= {"outcome", "final", "final_simplified", "iterations", "stats", "elapsed_ms"}


def test_outcome_names_total():
    assert len(set(OUTCOME_NAMES.values())) == len(OUTCOME_NAMES) == 6
    assert set(OUTCOME_NAMES.values()) == set(SCHEMA["properties"]["outcome"]["enum"])


def test_oracle_check(capsys, spec_path):
    code, out, _ = run(capsys, "oracle-check", spec_path("drone.wspec"))
    assert (code, out.strip()) == (0, "AGREE")
    code, out, _ = run(capsys, "oracle-check", spec_path("desired_holds.wspec"))
    assert (code, out.strip()) == (0, "AGREE")
    assert run(capsys, "oracle-check", spec_path("wide.wspec"))[0] == 4


def test_oracle_check_identity(capsys, tmp_path):
    path = tmp_path / "same.wspec"
    path.write_text("assume: a -> b\ndesired: a -> b\ncritical: true\n")
    assert run(capsys, "oracle-check", str(path))[1].strip() == "AGREE"


def _parse_dimacs(text):
    names = {}
    clauses = []
    header = None
    for line in text.splitlines():
        if line.startswith("c "):
            _, k, name = line.split()
            names[int(k)] = name
        elif line.startswith("p cnf"):
            header = tuple(map(int, line.split()[2:]))
        else:
            lits = list(map(int, line.split()))
            assert lits[-1] == 0
            clauses.append(tuple(lits[:-1]))
    return header, names, clauses


def _external_sat(clauses):
    solvers = pytest.importorskip("pysat.solvers")
    if any(len(c) == 0 for c in clauses):
        return False
    with solvers.Minisat22(bootstrap_with=[list(c) for c in clauses]) as s:
        return s.solve()


@pytest.mark.parametrize("which, satisfiable", [("negF0", True), ("F0", True), ("assumption", True)])
def test_export_dimacs_drone(capsys, spec_path, which, satisfiable):
    code, out, _ = run(capsys, "export-dimacs", spec_path("drone.wspec"), "--which", which)
    assert code == 0
    header, names, clauses = _parse_dimacs(out)
    assert header == (len(names), len(clauses))
    assert all(abs(l) <= header[0] for c in clauses for l in c)
    # negF0 satisfiable exactly because F(0) is not valid
    assert _external_sat(clauses) is satisfiable


def test_export_dimacs_valid_f(capsys, tmp_path):
    path = tmp_path / "holds.wspec"
    path.write_text("assume: a & b\ndesired: a\ncritical: a | b\n")
    _, out, _ = run(capsys, "export-dimacs", str(path), "--which", "negF0")
    assert _external_sat(_parse_dimacs(out)[2]) is False


def test_export_dimacs_constants(capsys, tmp_path):
    bottom = tmp_path / "bottom.wspec"
    bottom.write_text("assume: false\ndesired: true\ncritical: true\n")
    _, out, _ = run(capsys, "export-dimacs", str(bottom), "--which", "assumption")
    assert "\n0\n" in "\n" + out
    top = tmp_path / "top.wspec"
    top.write_text("assume: true\ndesired: true\ncritical: true\n")
    _, out, _ = run(capsys, "export-dimacs", str(top), "--which", "assumption")
    assert out.strip() == "p cnf 0 0"
