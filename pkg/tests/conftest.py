import pytest

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        detail = dict(item.user_properties).get("detail", "")
        _ACCEPTANCE[marker.args[0]] = (marker.args[1], report.passed, report.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, passed, duration, detail = _ACCEPTANCE[n]
        line = f"{'PASS' if passed else 'FAIL'}  {n:>2}. {title} ({duration:.2f} s)"
        terminalreporter.write_line(line + (f": {detail}" if detail else ""))
