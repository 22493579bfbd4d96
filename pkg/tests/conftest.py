import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: package exit criteria")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.get_closest_marker("acceptance"):
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _criteria.append((report.passed, label, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for passed, label, duration in _criteria:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  ({duration:.2f}s)")
