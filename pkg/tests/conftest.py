from collections import OrderedDict

import pytest

_criteria = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _criteria.setdefault(number, {"title": title, "nodes": {}})["nodes"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _criteria.values():
        if report.nodeid in entry["nodes"]:
            if report.failed or (report.when == "call" and report.skipped):
                entry["nodes"][report.nodeid] = False
            elif report.when == "call" and report.passed and entry["nodes"][report.nodeid] is None:
                entry["nodes"][report.nodeid] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, entry in sorted(_criteria.items()):
        results = list(entry["nodes"].values())
        if any(r is False for r in results):
            status = "FAIL"
        elif results and all(r is True for r in results):
            status = "PASS"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']} "
                                    f"({sum(r is True for r in results)}/{len(results)} checks)")


@pytest.fixture
def show():
    """Print a measured value so it appears in ``pytest -s`` / ``-rA`` output."""
    def _show(*args):
        print(*args)
    return _show
