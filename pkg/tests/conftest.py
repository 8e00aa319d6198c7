"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "notes": []})
    failed = rep.failed or hasattr(rep, "wasxfail")
    if rep.when == "call" or failed:
        if failed:
            entry["ok"] = False
        for key, value in item.user_properties:
            if key == "measured" and rep.when == "call":
                entry["notes"].append(str(value))
        if hasattr(rep, "wasxfail"):
            entry["notes"].append(f"expected failure: {rep.wasxfail}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if e["ok"] else "FAIL"
        notes = "; ".join(e["notes"])
        terminalreporter.write_line(f"{status} criterion {number:>2}: {e['title']}" + (f" [{notes}]" if notes else ""))
