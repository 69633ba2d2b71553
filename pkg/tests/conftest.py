import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SUITE_BUDGET_S = 120.0
_START = time.perf_counter()
_RESULTS = {}

CRITERIA = {
    1: "array directivity/HPBW of the 8.56 cm URA at 3.5/14/28 GHz",
    2: "balanced coverage/capacity band endpoints",
    3: "PSP/R properties on 1000 synthetic links",
    4: "RIS case study SE/EE ordering and mean SE gap",
    5: "spectrum totals, range resolution and union oracle",
    6: "byte-identical reruns and suite runtime",
}


def record(criterion, ok, detail=""):
    """Store one acceptance outcome; several checks for a criterion are AND-ed."""
    prev_ok, prev_detail = _RESULTS.get(criterion, (True, []))
    _RESULTS[criterion] = (prev_ok and bool(ok), prev_detail + ([detail] if detail else []))
    return ok


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    elapsed = time.perf_counter() - _START
    if 6 in _RESULTS:
        record(6, elapsed < SUITE_BUDGET_S, f"suite {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s)")
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _RESULTS:
            terminalreporter.write_line(f"criterion {n}: NOT RUN  {CRITERIA[n]}")
            continue
        ok, details = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]} | {'; '.join(details)}")
