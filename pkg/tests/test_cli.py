from __future__ import annotations

from pathlib import Path

import pytest

from stablemaps.cli import main
from stablemaps.state import format_state, parse_state
from stablemaps.transitions import parse_plan

GOLDEN = Path(__file__).parent / "golden"
F0 = "mapstate v1\nsurface S0 genus=0 direction=inward parent=none\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def f0(tmp_path):
    path = tmp_path / "f0.state"
    path.write_text(F0)
    return path


def golden(name: str) -> str:
    return (GOLDEN / name).read_text()


@pytest.mark.parametrize(
    "argv, name",
    [
        (["plan-fold-free", "--n", "1", "--q", "1"], "plan_fold_free_1_1.txt"),
        (["walk", "--seed", "11", "--steps", "8", "--check"], "walk_11_8.txt"),
        (["enumerate", "--max-steps", "2"], "enumerate_2.txt"),
        (["check-fold", "--nested-pairs", "2"], "check_fold_pairs_2.txt"),
        (["fixtures"], "fixtures.txt"),
    ],
)
def test_golden_outputs(capsys, argv, name):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == golden(name)


def test_verify_golden(capsys, f0):
    code, out, _ = run(capsys, "verify", f0, GOLDEN / "plan_fold_free_1_1.txt")
    assert code == 0
    assert out == golden("verify_fold_free_1_1.txt")
    assert "final=(3,0,1,4)" in out and "holds=true" in out


def test_invariants(capsys, f0):
    assert run(capsys, "invariants", f0)[:2] == (0, "tuple=(1,0,0,0)\niv=2\n")


def test_malformed_state_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.state"
    bad.write_text("mapstate v1\nsurface A genus=0\ncircuit A swallowtails=1\n")
    code, out, err = run(capsys, "invariants", bad)
    assert code == 2 and out == "" and "line 3" in err
    assert run(capsys, "invariants", tmp_path / "missing")[0] == 2


def test_bad_flags_exit_2(capsys):
    assert run(capsys, "plan", "--target", "1,0,0")[0] == 2
    assert run(capsys, "plan-prescribed", "--genera", "1,x")[0] == 2
    assert run(capsys, "check-fold", "--genera", "0", "--concentric", "1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "plan-fold-free", "--n", "-1", "--q", "0")[0] == 2


def test_help_exits_0(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "check-fold" in out


def test_apply_writes_state(capsys, f0, tmp_path):
    plan = tmp_path / "p.plan"
    plan.write_text("plan v1\nL +\nPg - surface=S1\n")
    out_path = tmp_path / "out.state"
    code, out, _ = run(capsys, "apply", f0, plan, "--out", out_path)
    assert code == 0 and out == "tuple=(2,2,1,0)\n"
    state = parse_state(out_path.read_text())
    assert state.surface("S1").genus == 1
    code, out, _ = run(capsys, "apply", f0, plan)
    assert out == format_state(state) + "tuple=(2,2,1,0)\n"


def test_apply_illegal_plan_exits_2(capsys, f0, tmp_path):
    plan = tmp_path / "p.plan"
    plan.write_text("plan v1\nB-g + surface=S0 circuit=0 circuit2=1\n")
    code, _, err = run(capsys, "apply", f0, plan)
    assert code == 2 and "step 1" in err


def test_verify_from_non_canonical_start(capsys, tmp_path):
    start = tmp_path / "s.state"
    start.write_text("mapstate v1\nsurface S0 genus=1\ncircuit S0 swallowtails=0\n")
    plan = tmp_path / "p.plan"
    plan.write_text("plan v1\nPg +\n")
    code, out, _ = run(capsys, "verify", start, plan)
    assert code == 0
    assert "anchored=false" in out and "bookkeeping=true" in out and "holds=" not in out


def test_plan_command(capsys):
    code, out, _ = run(capsys, "plan", "--target", "2,2,1,0", "--max-steps", "4")
    assert code == 0
    assert len(parse_plan(out)) == 2
    assert run(capsys, "plan", "--target", "1,0,0,1", "--max-steps", "8")[:2] == (1, "unreachable\n")
    code, out, _ = run(capsys, "plan", "--target", "1,0,0,0")
    assert code == 0 and parse_plan(out) == []


@pytest.mark.parametrize(
    "argv",
    [
        ["plan-prescribed", "--genera", "1,0,2"],
        ["plan-fold-free", "--n", "0", "--q", "2"],
        ["plan-fold-free", "--n", "2", "--q", "3"],
        ["plan", "--target", "1,0,1,2", "--max-steps", "6"],
    ],
)
def test_emitted_plans_verify(capsys, f0, tmp_path, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    plan = tmp_path / "emitted.plan"
    plan.write_text(out)
    code, report, _ = run(capsys, "verify", f0, plan)
    assert code == 0 and "holds=true" in report


def test_enumerate_swallowtail_free_and_plot(capsys, tmp_path):
    target = tmp_path / "tuples.png"
    code, out, _ = run(capsys, "enumerate", "--max-steps", "3", "--swallowtail-free", "--plot", target)
    lines = out.splitlines()
    assert code == 0
    assert all(line.endswith(",0)") for line in lines if line.startswith("("))
    assert lines[-1] == f"plot={target}"
    assert target.read_bytes().startswith(b"\x89PNG")


def test_walk_plot(capsys, tmp_path):
    target = tmp_path / "walk.png"
    code, out, _ = run(capsys, "walk", "--seed", "2", "--steps", "10", "--plot", target)
    assert code == 0 and out.endswith(f"plot={target}\n")
    assert target.exists()


def test_check_fold(capsys):
    code, out, _ = run(capsys, "check-fold", "--genera", "0,0")
    assert code == 1 and "feasible=false" in out
    code, out, _ = run(capsys, "check-fold", "--concentric", "5")
    assert code == 0 and "feasible=true" in out and out.count("surface ") == 5
    assert run(capsys, "check-fold", "--concentric", "4")[0] == 2
    assert run(capsys, "check-fold", "--nested-pairs", "1,0")[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    done = subprocess.run([sys.executable, "-m", "stablemaps", "check-fold", "--genera", "0"], capture_output=True, text=True)
    assert done.returncode == 0 and "feasible=true" in done.stdout
