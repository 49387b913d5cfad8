"""All twelve acceptance criteria at full scale.

Each criterion is one test; its PASS/FAIL line is printed in the terminal
summary (see conftest.py).  Run directly with ``python tests/test_acceptance.py``
to get only the summary lines.
"""

import json
import sys

import pytest

from presym import acceptance as ac
from presym.cli import main

SEED = 0
RESULTS = {}


@pytest.mark.slow
@pytest.mark.parametrize("cid", sorted(ac.CRITERIA), ids=lambda c: f"criterion_{c:02d}")
def test_criterion(cid):
    res = ac.run_criterion(cid, SEED, "full")
    RESULTS[cid] = res
    failed = [c for c in res["checks"] if not c.passed]
    assert res["checks"], "criterion produced no checks"
    assert not failed, "\n".join(f"{c.name}: {c.value!r} {c.relation} {c.threshold!r} witness={c.witness}" for c in failed)


@pytest.mark.slow
def test_selftest_reports_are_byte_identical_across_cli_runs(tmp_path):
    args = ["selftest", "--scale", "quick", "--only", "1,2,9,10", "--seed", str(SEED)]
    codes = [main(args + ["--out", str(tmp_path / name)]) for name in ("a", "b")]
    a = (tmp_path / "a" / "report.json").read_bytes()
    b = (tmp_path / "b" / "report.json").read_bytes()
    assert codes == [0, 0]
    assert a == b
    assert json.loads(a)["passed"] is True


def summary_lines():
    return [line for cid in sorted(RESULTS) for line in ac.summary_lines([RESULTS[cid]])]


if __name__ == "__main__":
    results = ac.run_suite(SEED, "full")
    print("\n".join(ac.summary_lines(results)))
    sys.exit(0 if ac.suite_passed(results) else 1)
