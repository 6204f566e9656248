import re
from pathlib import Path

from hypothesis import settings

# exact arithmetic makes individual examples slow but not unbounded
settings.register_profile("f1an", deadline=None)
settings.load_profile("f1an")

GOLDEN = Path(__file__).parent / "golden"

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[k] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        terminalreporter.write_line(f"criterion {k}: {_results[k]}")
