import pytest

CRITERIA = {
    1: "Table 1 order-0 quartic anharmonic levels",
    2: "Table 2 order-1 quartic anharmonic levels",
    3: "Table 3 order-2 quartic anharmonic levels",
    4: "Table 4 order-0 pure quartic levels",
    5: "Table 5 order-1/2 pure quartic levels",
    6: "Baseline columns (PT, CSA, WKB0)",
    7: "Oracle references and relative-error columns",
    8: "Gaussian closed form, series and limits",
    9: "Invariant suite",
    10: "Failure paths",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    failed = report.failed or (report.when == "call" and report.skipped)
    entry = _outcomes.setdefault(number, {"failed": False, "tests": set()})
    entry["tests"].add(item.name)
    if failed:
        entry["failed"] = True


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        if number not in _outcomes:
            status = "NOT RUN"
        else:
            status = "FAIL" if _outcomes[number]["failed"] else "PASS"
        terminalreporter.write_line(f"AC{number:<2} {status:<7} {CRITERIA[number]}")
