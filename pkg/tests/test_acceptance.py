"""Acceptance suite at full scale: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; under
pytest each criterion is its own test and its line is printed to the terminal.
"""

import sys

import pytest

from fracmatroid.selfcheck import CHECKS, run_check

SEED = 0


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    res = run_check(number, "full", SEED)
    with capsys.disabled():
        print("\n" + res.line())
        for failure in res.failures[:5]:
            print(f"    {failure}")
    assert res.passed, res.line()


if __name__ == "__main__":
    results = [run_check(k, "full", SEED) for k in sorted(CHECKS)]
    for res in results:
        print(res.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
