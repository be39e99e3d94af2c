import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}  # id -> [text, status]
_owner = {}  # nodeid -> id


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            cid, text = mark.args
            _criteria.setdefault(cid, [text, None])
            _owner[item.nodeid] = cid


def pytest_runtest_logreport(report):
    cid = _owner.get(report.nodeid)
    if cid is None:
        return
    entry = _criteria[cid]
    if report.failed:
        entry[1] = "FAIL"
    elif report.skipped and entry[1] is None:
        entry[1] = "SKIP"
    elif report.when == "call" and report.passed and entry[1] in (None, "SKIP"):
        entry[1] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid, (text, status) in _criteria.items():
        terminalreporter.write_line(f"{status or 'NOT RUN':<7} {cid:>4}  {text}")
