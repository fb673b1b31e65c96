import pytest

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call" and report.passed:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "seconds": 0.0})
    entry["passed"] &= report.passed
    if report.when == "call":
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        c = _criteria[number]
        verdict = "PASS" if c["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {c['title']}  ({c['seconds']:.2f} s)")
