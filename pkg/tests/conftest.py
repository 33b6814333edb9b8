import pathlib
import time
from contextlib import contextmanager

import pytest

from platlab import (enumerate_closed, make_mo, make_powerset_space,
                     separated_product)

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def mo2():
    return make_mo(2)


@pytest.fixture(scope="session")
def mo2_sys(mo2):
    return enumerate_closed(mo2)


@pytest.fixture(scope="session")
def pow3():
    return make_powerset_space(3)


@pytest.fixture(scope="session")
def pow3_sys(pow3):
    return enumerate_closed(pow3)


@pytest.fixture(scope="session")
def mo2_product(mo2):
    return separated_product(mo2, mo2)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Timed acceptance-criterion scope; one verdict line per criterion is
    echoed in the terminal summary with the elapsed time and budget."""

    @contextmanager
    def _criterion(num, summary, limit):
        t0 = time.monotonic()
        status = "FAIL"
        try:
            yield
            status = "PASS"
        finally:
            t = time.monotonic() - t0
            ACCEPTANCE_LINES.append(
                f"[criterion {num:02d}] {status}  {summary}  "
                f"({t:.2f}s / budget {limit}s)")
            if status == "PASS":
                assert t < limit, \
                    f"criterion {num} exceeded {limit}s ({t:.2f}s)"

    return _criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
