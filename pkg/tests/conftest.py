_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = (m.args[0], m.args[1])


def pytest_deselected(items):
    for item in items:
        _criteria.pop(item.nodeid, None)


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
    if report.skipped:
        reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
        _outcomes[report.nodeid] = ("SKIP", reason)
    elif report.failed:
        _outcomes[report.nodeid] = ("FAIL", detail)
    elif report.when == "call":
        _outcomes[report.nodeid] = ("PASS", detail)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (num, title) in sorted(_criteria.items(), key=lambda kv: kv[1][0]):
        status, detail = _outcomes.get(nodeid, ("NOT RUN", ""))
        line = f"criterion {num} ({title}): {status}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
