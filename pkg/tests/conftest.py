import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    name, title = marker.args
    entry = _results.setdefault(name, [title, True, 0.0])
    entry[1] = entry[1] and report.passed
    entry[2] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results):
        title, ok, seconds = _results[name]
        terminalreporter.write_line(f"{name} {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {title}")
