import re

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    ok = _CRITERIA.get(key, True)
    if report.failed or (report.when == "call" and report.skipped):
        ok = False
    _CRITERIA[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    merged: dict = {}
    for (num, name), ok in sorted(_CRITERIA.items()):
        merged.setdefault(num, []).append((name, ok))
    for num, items in merged.items():
        ok = all(o for _, o in items)
        label = items[0][0].replace("_", " ")
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {'PASS' if ok else 'FAIL'}")
