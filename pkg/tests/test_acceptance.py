"""Acceptance criteria AC-1 .. AC-10 at their stated tolerances and budgets."""

import pytest

from fracmorrey import checks

from .conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("cid", list(checks.CHECKS))
def test_acceptance(cid):
    res = checks.CHECKS[cid]()
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.passed, line
