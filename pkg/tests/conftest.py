import os

import pytest

# fixture paths in the tests are relative to the repository root
os.chdir(os.path.join(os.path.dirname(__file__), ".."))

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    n, text = mark.args
    prev = CRITERIA.get(n, (text, True))[1]
    CRITERIA[n] = (text, prev and rep.passed and not rep.skipped)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(CRITERIA):
        text, ok = CRITERIA[n]
        terminalreporter.write_line("[%s] criterion %d: %s" % ("PASS" if ok else "FAIL", n, text))
