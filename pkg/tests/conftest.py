import json
import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def kurepa_oracle():
    return json.loads((FIXTURES / "kurepa_oracle.json").read_text())


class _CaseCache:
    """Runs each casebook case at most once per test session."""

    def __init__(self):
        self._reports = {}

    def __call__(self, name):
        from minimaxproof.casebook import run_case

        if name not in self._reports:
            self._reports[name] = run_case(name)
        return self._reports[name]


@pytest.fixture(scope="session")
def case_report():
    return _CaseCache()


_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record one verdict line per acceptance criterion; printed in the terminal summary."""

    def record(number, passed, detail):
        _ACCEPTANCE[number] = (bool(passed), detail)
        print(f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
