import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from helixinfo.classify import default_config  # noqa: E402
from helixinfo.entropy import CellCube  # noqa: E402
from helixinfo.ingest import bundled_path, ingest_counts  # noqa: E402
from helixinfo.overlap import CountVector  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def table5():
    return ingest_counts(bundled_path("table5"))


@pytest.fixture
def hand_vector():
    return CountVector(u=100, i=80, g=60, ui=20, ug=15, ig=10, uig=5)


# 8 integer cells in 0..64 with a positive total: rationals over denominator <= 64
rational_cubes = st.lists(st.integers(0, 64), min_size=8, max_size=8).filter(any).map(
    lambda cells: CellCube(tuple(cells))
)

occupied_cells = st.lists(st.integers(0, 10_000), min_size=7, max_size=7)


@st.composite
def consistent_vectors(draw, with_total=None):
    """CountVectors built from non-negative exclusive cells, hence consistent."""
    u1, i1, g1, ui1, ug1, ig1, uig = draw(occupied_cells)
    union = u1 + i1 + g1 + ui1 + ug1 + ig1 + uig
    add_total = draw(st.booleans()) if with_total is None else with_total
    total = union + draw(st.integers(0, 10_000)) if add_total else None
    return CountVector(
        u=u1 + ui1 + ug1 + uig,
        i=i1 + ui1 + ig1 + uig,
        g=g1 + ug1 + ig1 + uig,
        ui=ui1 + uig,
        ug=ug1 + uig,
        ig=ig1 + uig,
        uig=uig,
        total=total,
    )
