import json
import subprocess
import sys
from pathlib import Path

import pytest

from gerbeforge.cli import main

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def write_job(tmp_path, job):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    return str(path)


def test_run_example_jobs(capsys):
    assert run(capsys, "run", "--job", str(EXAMPLES / "cup_and_lift.json"))[0] == 0
    assert run(capsys, "run", "--job", str(EXAMPLES / "symbols.json"))[0] == 0
    code, out, _ = run(capsys, "run", "--job", str(EXAMPLES / "wrong_expectation.json"))
    assert code == 1 and "[FAIL]" in out and "expected class_order = 2, got 1" in out


def test_empty_task_list_exits_0(capsys, tmp_path):
    assert run(capsys, "run", "--job", write_job(tmp_path, {"version": 1, "tasks": []}))[0] == 0


@pytest.mark.parametrize("job", [
    {"version": 1},
    {"version": 1, "tasks": [{"name": "x", "op": "cup", "args": {"a": "nope", "b": "nope"}}]},
    {"version": 1, "tasks": [], "definitions": [{"name": "G", "kind": "group", "value": "H"},
                                                {"name": "H", "kind": "group", "value": "G"}]},
])
def test_schema_and_reference_errors_exit_2(capsys, tmp_path, job):
    code, _, err = run(capsys, "run", "--job", write_job(tmp_path, job))
    assert code == 2 and err.startswith("gerbeforge:")


def test_unreadable_job_exits_2(capsys, tmp_path):
    assert run(capsys, "run", "--job", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "run", "--job", str(bad))[0] == 2


def test_report_file_and_format(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "run", "--job", str(EXAMPLES / "symbols.json"), "--report", str(out), "--format", "json")
    assert code == 0
    report = json.loads(out.read_text())
    assert report["job"] == "symbols" and report["summary"]["fail"] == 0


def test_seed_flag_env_and_job_field(capsys, monkeypatch):
    job = str(EXAMPLES / "cup_and_lift.json")  # carries seed 11
    assert run_json(capsys, "run", "--job", job)[1]["seed"] == 11
    assert run_json(capsys, "run", "--job", job, "--seed", "5")[1]["seed"] == 5
    monkeypatch.setenv("GERBEFORGE_SEED", "42")
    assert run_json(capsys, "run", "--job", job)[1]["seed"] == 11
    assert run_json(capsys, "run", "--job", str(EXAMPLES / "symbols.json"))[1]["seed"] == 42
    assert run_json(capsys, "cohomology")[1]["seed"] == 42
    assert run(capsys, "cohomology", "--seed", str(2 ** 64))[0] == 2
    monkeypatch.setenv("GERBEFORGE_SEED", "abc")
    assert run(capsys, "cohomology")[0] == 2


def test_parallel_jobs_give_identical_reports(capsys):
    job = str(EXAMPLES / "cup_and_lift.json")
    a = run(capsys, "run", "--job", job, "--format", "json")[1]
    b = run(capsys, "run", "--job", job, "--format", "json", "--jobs", "3")[1]
    assert a == b
    assert run(capsys, "cohomology", "--jobs", "0")[0] == 2


def test_cohomology_command(capsys):
    code, report = run_json(capsys, "cohomology", "--nerve", "sphere", "--group", "Z")
    assert code == 0
    ranks = [t["result"]["free_rank"] for t in report["tasks"]]
    assert ranks == [1, 0, 1]
    code, report = run_json(capsys, "cohomology", "--nerve", "torus", "--group", "Z/2", "--degree", "1")
    assert [t["result"]["invariant_factors"] for t in report["tasks"]] == [[2, 2]]
    assert run(capsys, "cohomology", "--group", "Q")[0] == 2
    assert run(capsys, "cohomology", "--nerve", "klein:3")[0] == 2


def test_cup_and_lift_commands(capsys):
    code, report = run_json(capsys, "cup", "--nerve", "projective_plane", "--a", "Z/2", "--b", "Z/2")
    assert code == 0 and report["tasks"][0]["result"]["class_order"] == 2
    code, report = run_json(capsys, "cup", "--nerve", "circle:5", "--a", "Z/2", "--b", "Z/2")
    assert code == 0 and report["tasks"][0]["result"]["class_order"] == 1
    code, report = run_json(capsys, "lift", "--nerve", "torus", "--a", "Z/2", "--b", "Z/4")
    assert code == 0 and len(report["tasks"]) == 4
    assert all(t["status"] == "pass" for t in report["tasks"])


def test_fourterm_command(capsys):
    code, report = run_json(capsys, "fourterm")
    assert code == 0
    nonzero = {t["name"] for t in report["tasks"] if t["result"]["nonzero"]}
    assert nonzero == {"rp2_bockstein", "sphere_free_resolution"}
    code, _, err = run(capsys, "fourterm", "--name", "nonexistent")
    assert code == 2 and "available" in err
    code, out, _ = run(capsys, "fourterm", "--name", "coarse_cover")
    assert code == 1 and "NoLiftError" in out


def test_dk_verify_command(capsys):
    code, report = run_json(capsys, "dk-verify", "--max-order", "4")
    assert code == 0
    result = report["tasks"][0]["result"]
    assert result["aw_matches"] and result["dold_kan"] and result["aw_pairs_checked"] > 0


def test_tame_command(capsys):
    code, report = run_json(capsys, "tame", "--p", "3", "--f", "[1, 2]", "--g", "[0, 1]", "--place", "[0, 1]")
    assert code == 0
    assert report["tasks"][0]["result"]["norm"] == 1
    assert report["tasks"][1]["result"]["holds"]
    code, report = run_json(capsys, "tame", "--p", "5", "--f", '{"num": [1, 1], "den": [0, 0, 1]}',
                            "--g", "[2, 0, 1]", "--place", "inf")
    assert code == 0
    assert run(capsys, "tame", "--p", "6", "--f", "[1]", "--g", "[1]")[0] == 2
    assert run(capsys, "tame", "--p", "5", "--f", "t", "--g", "[1]")[0] == 2


def test_selftest_subset(capsys):
    code, report = run_json(capsys, "selftest", "--only", "6,8")
    assert code == 0 and report["passed"]
    assert [c["criterion"] for c in report["criteria"]] == [6, 8]
    assert "seconds" not in report["criteria"][0]
    code, out, _ = run(capsys, "selftest", "--only", "6", "--timing")
    assert code == 0 and "[PASS] 6." in out and "s /" in out
    assert run(capsys, "selftest", "--only", "12")[0] == 2
    assert run(capsys, "selftest", "--only", "x")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gerbeforge.cli", "cohomology", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["job"] == "cohomology"
    proc = subprocess.run([sys.executable, "-m", "gerbeforge.cli", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2
