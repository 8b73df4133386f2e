"""One test per acceptance criterion.

Each result line is printed as ``[PASS]`` or ``[FAIL]``; the lines are also
collected into the pytest terminal summary.  Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""

import pytest

from skeinlab import acceptance

SEED = 7
LINES = []


@pytest.fixture(scope="module")
def results():
    return {c.number: c for c in acceptance.run_all(SEED)}


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(results, number):
    check = results[number]
    LINES.append(check.line())
    print(check.line())
    assert check.passed, check.summary


if __name__ == "__main__":
    checks = acceptance.run_all(SEED)
    for c in checks:
        print(c.line())
    raise SystemExit(0 if all(c.passed for c in checks) else 1)
