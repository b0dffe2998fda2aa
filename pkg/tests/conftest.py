import re
from collections import defaultdict

import pytest

from disjoint_spm import matrices as mx

_acceptance = defaultdict(list)


@pytest.fixture(scope="session")
def hist3():
    return mx.agreement_histogram(3)


@pytest.fixture(scope="session")
def brute3():
    return mx.brute_force_disjoint_count(3)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)([\w\[\]-]*)", report.nodeid)
    if match:
        _acceptance[int(match.group(1))].append((match.group(0).split("::")[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        parts = _acceptance[number]
        ok = all(passed for _, passed in parts)
        detail = ", ".join(f"{name}={'pass' if passed else 'FAIL'}" for name, passed in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  ({detail})")
