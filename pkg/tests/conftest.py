import numpy as np
import pytest

from spin_rwa import SpinQuantum, StateVector

FIGURE_SPINS = [SpinQuantum(1), SpinQuantum(2), SpinQuantum(4), SpinQuantum(7), SpinQuantum(9)]
SMALL_SPINS = [SpinQuantum(n) for n in range(1, 10)]

_acceptance_lines = []


def random_state(spin, rng):
    raw = rng.normal(size=spin.dimension()) + 1j * rng.normal(size=spin.dimension())
    return StateVector(spin, raw).normalized()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line for a criterion.

    ``checks`` holds ``(label, worst, tolerance, passed)`` tuples; the
    criterion passes only if every check does.
    """
    def report(criterion, description, checks):
        passed = all(ok for *_, ok in checks)
        detail = "; ".join(f"{label}: {worst:.3e} vs {tol:g}" for label, worst, tol, _ in checks)
        line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {description} [{detail}]"
        _acceptance_lines.append(line)
        print(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
