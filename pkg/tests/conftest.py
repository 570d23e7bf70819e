import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cyclic_ainfty.clifford import build_model  # noqa: E402


@pytest.fixture(scope="session")
def fmodel():
    return build_model()


@pytest.fixture(scope="session")
def emodel():
    return build_model(basis="e")


# acceptance results, printed once more in the terminal summary
ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    def record(number, ok, note=""):
        ACCEPTANCE[number] = (ok, note)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {note}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {note}".rstrip())
