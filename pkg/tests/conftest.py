import pytest

from safenav.world import CellKind, GridMap, parse_map

from .maps import CORNER_MAP, CORRIDOR_MAP, DETOUR_MAP, LANE_MAP, OPEN_MAP


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow statistical tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def corner_map():
    return parse_map(CORNER_MAP)


@pytest.fixture
def corridor_map():
    return parse_map(CORRIDOR_MAP)


@pytest.fixture
def open_map():
    return parse_map(OPEN_MAP)


@pytest.fixture
def lane_map():
    return parse_map(LANE_MAP)


@pytest.fixture
def detour_map():
    return parse_map(DETOUR_MAP)


@pytest.fixture
def lane_everywhere():
    # every cell but the start is a lane; moving right can only reach the goal
    cells = (CellKind.FREE,) + (CellKind.SURFACE_HAZARD,) * 4
    path = tuple((x, 0) for x in range(5))
    return GridMap(5, 1, cells, (0, 0), (4, 0), path)
