import numpy as np
import pytest

from arithradon import arith

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def tables_2k():
    """Sieved tables to 2**13 keyed by name."""
    return {name: arith.build_table(name, 1 << 13) for name in arith.TABLE_BUILDERS}


@pytest.fixture(scope="session")
def phi_d():
    """(phi-even, d-signodd) with tables to 2**14."""
    return arith.make_fn("phi", "even", 1 << 14), arith.make_fn("d", "signodd", 1 << 14)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def report():
    def record(criterion, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {criterion}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
