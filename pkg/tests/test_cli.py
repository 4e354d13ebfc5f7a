import json
import subprocess
import sys
import textwrap

import pytest

from modelplan.cli import main
from modelplan.fixtures import get_fixture

COLLAR = get_fixture("collar-screwing-2rivets")
ASSEMBLE = get_fixture("assemble-part")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def snapshot(path):
    return {p.relative_to(path): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


def test_validate_clean(capsys):
    assert run(capsys, "validate", ASSEMBLE.model) == (0, "", "")


def test_validate_duplicate_types(capsys):
    code, out, err = run(capsys, "validate", get_fixture("duplicate-types").model)
    assert code == 2 and out == ""
    lines = err.splitlines()
    assert len(lines) == 1 and " P02 " in lines[0]


def test_validate_rules_flag_and_json(capsys):
    dup = get_fixture("duplicate-types").model
    assert run(capsys, "validate", dup, "--rules=-P02")[0] == 0
    code, _, err = run(capsys, "validate", dup, "--json")
    assert code == 2 and json.loads(err)[0]["rule"] == "P02"
    assert run(capsys, "validate", dup, "--rules", "P42")[0] == 1


def test_validate_input_errors(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "missing.pm1")[0] == 1
    bad = tmp_path / "bad.pm1"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and "ingest.syntax" in err
    assert run(capsys, "validate", get_fixture("dangling-flow").model)[0] == 1


def test_generate_writes_both_files_deterministically(capsys, tmp_path):
    args = ("generate", COLLAR.model, "--instance", COLLAR.instance, "--out", tmp_path)
    assert run(capsys, *args)[0] == 0
    first = snapshot(tmp_path)
    assert sorted(map(str, first)) == ["domain.pddl", "problem.pddl"]
    assert b"MoveToNextRivet" in first[next(p for p in first if p.name == "domain.pddl")]
    assert run(capsys, *args)[0] == 0
    assert snapshot(tmp_path) == first


def test_generate_model_only(capsys, tmp_path):
    assert run(capsys, "generate", ASSEMBLE.model, "--out", tmp_path)[0] == 0
    assert [p.name for p in tmp_path.iterdir()] == ["domain.pddl"]


def test_invalid_model_writes_nothing(capsys, tmp_path):
    out = tmp_path / "out"
    assert run(capsys, "generate", get_fixture("duplicate-types").model, "--out", out)[0] == 2
    assert not out.exists()


@pytest.mark.parametrize("instance_patch,code", [({"goal": []}, 2), ({"format_version": "9"}, 1), ({"objects": [{"name": "x", "type": "nope"}]}, 2)])
def test_failed_generate_leaves_existing_files(capsys, tmp_path, instance_patch, code):
    out = tmp_path / "out"
    out.mkdir()
    (out / "domain.pddl").write_text("old domain")
    (out / "problem.pddl").write_text("old problem")
    before = snapshot(out)
    doc = json.loads(ASSEMBLE.instance.read_text())
    doc.update(instance_patch)
    inst = tmp_path / "bad.pi1"
    inst.write_text(json.dumps(doc))
    assert run(capsys, "generate", ASSEMBLE.model, "--instance", inst, "--out", out)[0] == code
    assert snapshot(out) == before


def test_solve_and_check(capsys, tmp_path):
    plan = tmp_path / "plan.txt"
    code, out, _ = run(capsys, "solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan)
    assert (code, out) == (0, "4\n")
    assert plan.read_text().count("ChangeEndEffector") == 1
    code, out, _ = run(capsys, "check", COLLAR.golden_domain, COLLAR.golden_problem, plan)
    assert (code, out) == (0, "plan accepted, cost = 4\n")
    assert run(capsys, "solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan, "--heuristic", "hmax")[1] == "4\n"


def test_check_rejects_bad_plans(capsys, tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("(MoveToNextRivet r1 r2)\n(ScrewCollarTypeB r2 effB)\n")
    code, out, _ = run(capsys, "check", COLLAR.golden_domain, COLLAR.golden_problem, plan)
    assert code == 2
    assert out.startswith("plan rejected at step 1 ((MoveToNextRivet r1 r2) is not applicable)")
    plan.write_text("this is not a plan\n")
    assert run(capsys, "check", COLLAR.golden_domain, COLLAR.golden_problem, plan)[0] == 1


def test_solve_unsolvable(capsys, tmp_path):
    problem = tmp_path / "p.pddl"
    problem.write_text(ASSEMBLE.golden_problem.read_text().replace("(available t1)", ""))
    plan = tmp_path / "plan.txt"
    assert run(capsys, "solve", ASSEMBLE.golden_domain, problem, "--out", plan)[0] == 3
    assert not plan.exists()


def test_solve_cap(capsys, tmp_path):
    plan = tmp_path / "plan.txt"
    assert run(capsys, "solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan, "--cap", "1")[0] == 4
    assert not plan.exists()
    assert run(capsys, "solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan, "--cap", "0")[0] == 1


def test_solve_input_errors(capsys, tmp_path):
    broken = tmp_path / "broken.pddl"
    broken.write_text("(define (domain")
    assert run(capsys, "solve", broken, COLLAR.golden_problem, "--out", tmp_path / "x")[0] == 1
    missing_value = tmp_path / "p.pddl"
    missing_value.write_text(COLLAR.golden_problem.read_text().replace("(= (RivetDistanceInformation r1 r2) 1)", ""))
    code, _, err = run(capsys, "solve", COLLAR.golden_domain, missing_value, "--out", tmp_path / "x")
    assert code == 1 and "missing-function-value" in err


def fake_planner(tmp_path, body):
    script = tmp_path / "planner.py"
    script.write_text(textwrap.dedent(body))
    return f"{sys.executable} {script} {{domain}} {{problem}} {{plan}}"


def test_external_planner_plan_is_validated(capsys, tmp_path):
    template = fake_planner(tmp_path, """
        import sys
        open(sys.argv[3], "w").write(
            "0: (SCREWCOLLARTYPEA r1 effA) [0]\\n1: (ChangeEndEffector effA effB) [3]\\n"
            "2: (MoveToNextRivet r1 r2) [1]\\n3: (ScrewCollarTypeB r2 effB) [0]\\n")
    """)
    plan = tmp_path / "plan.txt"
    code, out, _ = run(capsys, "solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan, "--external-planner", template)
    assert (code, out) == (0, "4\n")
    assert plan.read_text().splitlines()[0] == "(ScrewCollarTypeA r1 effA)"


def test_external_planner_failures(capsys, tmp_path):
    plan = tmp_path / "plan.txt"
    args = ("solve", COLLAR.golden_domain, COLLAR.golden_problem, "--out", plan, "--external-planner")
    gives_up = fake_planner(tmp_path, "import sys; sys.exit(5)")
    assert run(capsys, *args, gives_up)[0] == 3
    wrong = fake_planner(tmp_path, "import sys; open(sys.argv[3], 'w').write('(MoveToNextRivet r1 r2)\\n')")
    code, _, err = run(capsys, *args, wrong)
    assert code == 2 and "not applicable" in err
    assert run(capsys, *args, "planner {nope}")[0] == 1
    assert not plan.exists()


def test_fmt_and_parse(capsys, tmp_path):
    messy = tmp_path / "messy.pddl"
    messy.write_text(" ".join(ASSEMBLE.golden_domain.read_text().split()).upper().replace("(DEFINE", "(define"))
    code, out, _ = run(capsys, "fmt", messy)
    assert code == 0 and out.startswith("(define (domain PRODUCTION)\n    (:requirements :typing)")
    target = tmp_path / "clean.pddl"
    assert run(capsys, "fmt", ASSEMBLE.golden_domain, "--out", target)[0] == 0
    assert target.read_text() == ASSEMBLE.golden_domain.read_text()
    assert run(capsys, "parse", ASSEMBLE.golden_domain, ASSEMBLE.golden_problem)[0] == 0
    messy.write_text("(define (domain d) (:action a))")
    code, _, err = run(capsys, "parse", messy)
    assert code == 1 and "pddl.syntax" in err
    assert run(capsys, "fmt", messy)[0] == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["solve", "only-one-arg"])
    assert info.value.code == 1


def test_module_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "modelplan", "validate", str(get_fixture("bad-domain-name").model)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 2 and " P01 " in result.stderr
