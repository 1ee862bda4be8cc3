import numpy as np
import pytest

from frameslab import _accel

BACKENDS = ["numba", "numpy"] if _accel.HAS_NUMBA else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    with _accel.use_backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


class Criteria:
    """Collects PASS/FAIL lines for acceptance criteria.

    Every check is recorded before anything is asserted, so one failing
    item does not hide the others in the same test.
    """

    def __init__(self):
        self.failed = []

    def __call__(self, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        if not ok:
            self.failed.append(line)

    def verify(self):
        if self.failed:
            pytest.fail("\n".join(self.failed), pytrace=False)


@pytest.fixture
def criterion():
    return Criteria()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
