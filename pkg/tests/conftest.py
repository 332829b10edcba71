import re

import pytest

from sharpineq.core import Variant, make_case


@pytest.fixture
def hardy32():
    return make_case(Variant.HARDY_SUBCRITICAL, 3, 2.0)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(k, ok, detail):
        lines[k] = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[k])
        return ok

    yield record
    # a criterion that raised before recording still gets its line
    m = re.match(r"test_c(\d+)_", request.node.name)
    if m and int(m.group(1)) not in lines:
        record(int(m.group(1)), False, "raised before completing")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
