"""Shared pytest wiring: the per-criterion verdict block after the run."""

import pytest

_VERDICTS: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(name): names the acceptance criterion a test implements",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.skipped:
        _VERDICTS.setdefault(name, "SKIP")
    elif report.when == "call" and report.passed:
        _VERDICTS.setdefault(name, "PASS")
    elif not report.passed:
        _VERDICTS[name] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _VERDICTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, verdict in _VERDICTS.items():
        terminalreporter.write_line(f"{verdict}  {name}")
