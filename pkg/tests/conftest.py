import time
from pathlib import Path

import pytest

from forage.kernels import Dynamics
from forage.scenario import five_vertex_fixture, lattice_fixture

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table1():
    return Dynamics()


@pytest.fixture(scope="session")
def lattice3():
    return lattice_fixture(3, 3)


@pytest.fixture(scope="session")
def strip5():
    return five_vertex_fixture()


@pytest.fixture(scope="session")
def table2_rows():
    """The (r=5, rho=0.005) row pair on the 20x20 lattice at n=200 and n=800,
    K=100 replicas sampled at t=5000. Returns the rows and the wall time."""
    from forage.config import parse_scenario
    from forage.harness import table2_grid
    from forage.scenario import build_scenario

    cfg = Path(__file__).resolve().parent.parent / "scenarios" / "lattice20.cfg"
    dg = build_scenario(parse_scenario(cfg))
    t0 = time.perf_counter()
    rows = table2_grid(dg, Dynamics(), [(5.0, 0.005, 200), (5.0, 0.005, 800)], K=100, t_bar=5000)
    return rows, time.perf_counter() - t0
