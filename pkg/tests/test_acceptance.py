"""Acceptance criteria 1-12 at their stated tolerances.

Each criterion prints one PASS/FAIL line. The whole module takes roughly an hour;
deselect it with ``-m "not slow"`` for a quick run.
"""
import pytest

from hilbert_lab import verify


@pytest.mark.slow
@pytest.mark.parametrize("number", [k for k, _, _ in verify.CRITERIA], ids=lambda k: f"criterion_{k:02d}")
def test_criterion(number, capsys):
    res = verify.run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line(), flush=True)
    assert res.passed, res.details
