import json
import os
import subprocess
import sys

import pytest

from varsel import golden
from varsel.cli import DEFAULT_SCENARIO, check_expectations, main, run_tasks
from varsel.scenario import Scenario, ScenarioError, load_scenario


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "varsel.cli", *args], capture_output=True, text=True, env=env or dict(os.environ)
    )


def small_scenario(tasks):
    return {
        "version": 1,
        "measures": {"leb": {"grid": ["0", "1"], "densities": ["1"]}},
        "signed_measures": {"d": {"densities": [0], "atoms": [["0.5", "1"]]}},
        "setmaps": {
            "s": {
                "grid": [0, "0.5", 1],
                "pieces": [{"components": [{"a0": -2, "b0": 2}]}, {"components": [{"a0": -2, "b0": 2}]}],
                "breakpoints": [[[-2, 2]], [[-1, 1]], [[-2, 2]]],
            }
        },
        "plqs": {"d1": {"dom": [-1, 1], "pieces": [[0, 0, 0]]}, "d2": {"dom": [-2, 2], "pieces": [[0, 0, 0]]}},
        "integrands": {
            "grow": {"tgrid": [0, 0.5, 1], "piece_plq": ["d1", "d1"], "break_plq": ["d1", "d2", "d1"]},
        },
        "tasks": tasks,
    }


def test_bundled_corpus_is_in_sync_with_builder():
    assert DEFAULT_SCENARIO.read_text() == golden.dumps(golden.build())


def test_every_golden_task_reproduces_its_expectations():
    reports, ok = run_tasks(load_scenario(DEFAULT_SCENARIO))
    failed = [(r["index"], r["expectations"]["failures"]) for r in reports if not r.get("expectations", {}).get("passed", True)]
    assert ok and not failed
    assert all("expect" in t for t in load_scenario(DEFAULT_SCENARIO).tasks)


def test_report_schema():
    reports, _ = run_tasks(load_scenario(DEFAULT_SCENARIO))
    for r in reports:
        assert {"task", "inputs", "verdicts", "witnesses", "values", "paper_anchor"} <= set(r)


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("-o", str(a), "run").returncode == 0
    assert run_cli("-o", str(b), "run").returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_spec_cli_examples(capsys):
    assert main(["check", "--map", "shrinkMap", "--measure", "lebPlusAtom", "--kind", "outer-regular"]) == 0
    assert json.loads(capsys.readouterr().out)["verdicts"]["verdict"] is True
    assert main(["check", "--map", "shrinkMap", "--kind", "fully-lsc"]) == 0
    assert json.loads(capsys.readouterr().out)["verdicts"]["verdict"] is False
    assert main(["duality", "--integrand", "shrinkDom", "--theta", "dirac05", "--measure", "lebesgue", "--levels", "8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["values"]["J"] == 1.0 and rep["values"]["estimates"][-1] >= 1.99


def test_oracle_command_reports_sets(capsys):
    assert main(["oracle", "--map", "shrinkMap", "--t", "0.5", "--kind", "mli", "--measure", "lebesgue", "--compare"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["values"]["step"] == 2.0**-10
    assert rep["values"]["sets"][0]["set"]
    assert rep["verdicts"]["within_bound"] is True


def test_unknown_name_exit_1(capsys):
    assert main(["limits", "--map", "nope"]) == 1
    assert "unknown setmap 'nope'" in capsys.readouterr().err


def test_bad_version_exit_1(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"version": 2}))
    assert main(["-s", str(p), "run"]) == 1
    assert "version" in capsys.readouterr().err


def test_invalid_json_exit_1(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{")
    assert main(["-s", str(p), "run"]) == 1


def test_base_measure_must_be_strictly_positive(tmp_path):
    doc = small_scenario([])
    doc["measures"]["bad"] = {"grid": [0, 0.5, 1], "densities": [0, 1]}
    with pytest.raises(ScenarioError, match="strictly positive"):
        Scenario.from_dict(doc)


def test_hypothesis_failure_is_named(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(small_scenario([])))
    assert main(["-s", str(p), "duality", "--integrand", "grow", "--theta", "d", "--measure", "leb", "--levels", "2"]) == 1
    assert "not inner semicontinuous" in capsys.readouterr().err


def test_failed_expectation_exit_2(tmp_path, capsys):
    tasks = [{"command": "check", "map": "s", "kind": "isc", "expect": {"verdicts.verdict": False}}]
    p = tmp_path / "s.json"
    p.write_text(json.dumps(small_scenario(tasks)))
    assert main(["-s", str(p), "run"]) == 2
    rep = json.loads(capsys.readouterr().out)
    assert rep[0]["expectations"]["failures"] == ["verdicts.verdict: expected False, got True"]


def test_string_numbers_and_ok_run(tmp_path, capsys):
    tasks = [
        {"command": "limits", "map": "s", "t": 0.5, "measure": "leb", "expect": {"values.limits.0.mli": [[-2.0, 2.0]]}},
        {"command": "selection", "map": "s", "counterexample": True, "measure": "leb",
         "expect": {"verdicts.classification": "essential_only"}},
    ]
    p = tmp_path / "s.json"
    p.write_text(json.dumps(small_scenario(tasks)))
    assert main(["-s", str(p), "run"]) == 0


def test_expectation_forms():
    rep = {"values": {"x": 1.0, "xs": [1, 2, 3]}, "verdicts": {"ok": True}}
    assert check_expectations(rep, {"values.x": {"approx": 1.0005, "tol": 1e-3}}) == []
    assert check_expectations(rep, {"values.xs.-1": 3, "values.x": {"min": 0.5, "max": 2}}) == []
    assert check_expectations(rep, {"verdicts.missing": 1}) == ["verdicts.missing: missing"]
    assert check_expectations(rep, {"values.x": {"max": 0.5}})


def test_tolerance_env_override():
    env = dict(os.environ, VARSEL_TOL="1e-6")
    out = subprocess.run([sys.executable, "-c", "from varsel._config import EPS; print(EPS)"], env=env, capture_output=True, text=True)
    assert float(out.stdout) == 1e-6
    env["VARSEL_TOL"] = "-1"
    assert subprocess.run([sys.executable, "-c", "import varsel"], env=env, capture_output=True).returncode != 0


def test_console_script_help():
    out = run_cli("--help")
    assert out.returncode == 0 and "bv-duality" in out.stdout
