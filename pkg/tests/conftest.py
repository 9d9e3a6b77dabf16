import pytest

from bogoliubov2d.scattering import PotentialSpec, solve_scattering

ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def bump():
    """Scattering solution of the default bump potential at unit density."""
    return solve_scattering(PotentialSpec.bump(), 1.0)


@pytest.fixture(scope="session")
def bump_b001(bump):
    return bump.at_b(0.01)


@pytest.fixture
def record():
    """Record one acceptance line: ``record(number, passed, detail)``."""

    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        tr.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
