import re

import pytest

from maninbench.enumeration import height_histogram

#: Bound of the shared histogram; covers T = 1.25 * 2^32 in degree 4.
SESSION_BOUND = 272

_criteria = {}


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("histogram-cache")


@pytest.fixture(scope="session")
def hist(cache_dir):
    return height_histogram(SESSION_BOUND, cache_dir=cache_dir)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        _criteria.setdefault(key, report.outcome)
        if report.failed:
            _criteria[key] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_criteria.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {name:<28} {verdict}")
