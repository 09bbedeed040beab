"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label = dict(report.user_properties).get("criterion", report.nodeid.split("::")[-1])
        _ACCEPTANCE[label] = (report.outcome.upper() if report.outcome != "passed" else "PASS",
                              dict(report.user_properties).get("summary", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, (outcome, summary) in _ACCEPTANCE.items():
        status = "PASS" if outcome == "PASS" else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f": {summary}" if summary else ""))
