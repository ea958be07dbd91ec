"""Acceptance battery at full scale, one test per criterion.

Each criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary.  The census cache lives in $ARITHSTAT_CACHE (default
~/.cache/arithstat) and is built on first use.
"""

import os

import pytest

from arithstat.acceptance import CRITERIA, Budget, Context, run_criterion


@pytest.fixture(scope="module")
def ctx():
    return Context(Budget(workers=int(os.environ.get("ARITHSTAT_WORKERS", os.cpu_count() or 1))))


@pytest.mark.slow
@pytest.mark.parametrize("crit", sorted(CRITERIA, key=lambda c: c.number), ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(crit, ctx, acceptance_log):
    r = run_criterion(crit, ctx)
    line = r.line()
    acceptance_log.append(line)
    print("\n" + line)
    assert r.status == "pass", f"{line}\nmeasured={r.measured}\nexpected={r.expected}"
