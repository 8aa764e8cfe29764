from __future__ import annotations

import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::(test_criterion_(\d+)\w*)", report.nodeid)
    if not m:
        return
    rec = _criteria.setdefault(int(m.group(2)), {"name": m.group(1), "failed": False,
                                                 "cases": 0, "secs": 0.0})
    rec["secs"] += report.duration
    rec["failed"] |= report.failed
    if report.when == "call":
        rec["cases"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        rec = _criteria[n]
        status = "FAIL" if rec["failed"] else "PASS"
        cases = f", {rec['cases']} cases" if rec["cases"] > 1 else ""
        terminalreporter.write_line(
            f"criterion {n:>2}: {status}  {rec['name']}  ({rec['secs']:.1f}s{cases})"
        )
