"""One pass/fail line per acceptance criterion, at the stated tolerances.

Each criterion is evaluated from the residual battery in ``gkcp2.checks``
and printed in the terminal summary.  Runtimes are measured per suite.
"""

from functools import lru_cache

import pytest

from conftest import ACCEPTANCE_LINES
from gkcp2 import checks

# criterion -> (suite, check ids, runtime budget in seconds); None means every check of the suite
CRITERIA = {
    "elliptic": ("elliptic", None, 30.0),
    "limits": ("limits", None, 5.0),
    "period_ode": ("periods", None, 10.0),
    "flow": ("flow", None, 60.0),
    "gks": (
        "gks",
        ["I_squared", "GKS_I", "GKS_II", "metric_symmetric", "metric_hermitian", "nijenhuis_I_plus", "F_closed", "small_dt_law"],
        300.0,
    ),
    "positivity": ("positivity", None, 120.0),
    "groupoid": ("groupoid", None, 30.0),
    "gkp": ("gkp", None, 60.0),
    "area": ("area", None, 10.0),
}


@lru_cache(maxsize=None)
def report(suite: str) -> checks.CheckReport:
    return checks.SUITES[suite](seed=checks.DEFAULT_SEED)


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    suite, ids, budget = CRITERIA[name]
    rep = report(suite)
    items = rep.items if ids is None else [rep.get(i) for i in ids]
    failed = [i for i in items if not i.passed]
    ok = not failed and rep.seconds < budget
    detail = ", ".join(f"{i.id} {i.residual:.2e}>={i.tolerance:.0e}" for i in failed) or f"{len(items)} checks"
    line = f"{'PASS' if ok else 'FAIL'}  {name:<11} {rep.seconds:7.2f}s/{budget:.0f}s  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
