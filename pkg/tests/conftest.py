import pytest

_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        cid, title = mark.args
        params = getattr(item, "callspec", None)
        if params is not None:
            title += " (" + ", ".join(f"{k}={v}" for k, v in params.params.items()) + ")"
        measured = "; ".join(f"{k}={v}" for k, v in rep.user_properties)
        _criteria.append((cid, title, rep.passed, measured))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, passed, measured in _criteria:
        line = f"{'PASS' if passed else 'FAIL'}  #{cid:<3} {title}"
        terminalreporter.write_line(line + (f"  [{measured}]" if measured else ""))
    n_pass = sum(1 for c in _criteria if c[2])
    terminalreporter.write_line(f"{n_pass}/{len(_criteria)} criterion checks passed")
