"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or use
``liaison verify-all``.
"""

import pytest

from liaison.acceptance import CRITERIA, run_criterion


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    res = run_criterion(k)
    with capsys.disabled():
        print("\n" + res.line())
        if not res.passed:
            for note in res.details:
                print(f"      {note}")
    assert res.passed, "\n".join(res.details)
