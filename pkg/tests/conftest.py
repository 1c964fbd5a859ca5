from __future__ import annotations

import pytest

_LOG = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test still asserts on ``ok`` itself."""
    log = request.config.stash[_LOG]

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        print(line)
        log.append((number, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_LOG, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(log):
        terminalreporter.write_line(line)
