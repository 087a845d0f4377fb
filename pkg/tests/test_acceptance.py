"""Acceptance criteria 1-9; one PASS/FAIL line per criterion (run with -s to see them)."""
import pytest

from treeverb.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.within_budget, f"took {result.elapsed:.2f}s, budget {result.budget}s"


def test_python_fallback_meets_chain_budget():
    import os
    import subprocess
    import sys

    env = dict(os.environ, TREEVERB_BACKEND="python")
    code = (
        "from treeverb import BACKEND; from treeverb.acceptance import run_criterion;"
        "r = run_criterion(1); print(BACKEND); print(r.line());"
        "raise SystemExit(0 if r.passed and r.within_budget else 1)"
    )
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.splitlines()[0] == "python"
