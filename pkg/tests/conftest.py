import numpy as np
import pytest

from tracelab.bank import BankConfig, generate_bank
from tracelab.grid import PeriodizedGrid
from tracelab.lp import build_generator, build_lp_system, max_block_count
from tracelab.traceext import build_eta_family


@pytest.fixture(scope="session")
def gen():
    return build_generator()


@pytest.fixture(scope="session")
def grid2d():
    return PeriodizedGrid((256, 128), half_period=2 * np.pi)


@pytest.fixture(scope="session")
def bgrid(grid2d):
    return grid2d.boundary_grid()


@pytest.fixture(scope="session")
def fsys(gen, grid2d):
    return build_lp_system(gen, max_block_count(grid2d), grid2d)


@pytest.fixture(scope="session")
def bsys(gen, bgrid):
    return build_lp_system(gen, 4, bgrid)


@pytest.fixture(scope="session")
def eta(grid2d):
    return build_eta_family(grid2d, 4)


@pytest.fixture(scope="session")
def boundary_bank(bgrid):
    cfg = BankConfig(
        shape=bgrid.shape,
        half_period=bgrid.half_period,
        band=4.0,
        size=9,
        seed=5,
        offset_axis0=False,
    )
    return [m.f for m in generate_bank(cfg)]


@pytest.fixture(scope="session")
def full_bank(grid2d):
    cfg = BankConfig(shape=grid2d.shape, half_period=grid2d.half_period, band=4.0, size=6, seed=9)
    return [m.f for m in generate_bank(cfg)]


@pytest.fixture(scope="session")
def grid1d():
    return PeriodizedGrid((4096,), half_period=8 * np.pi)


@pytest.fixture(scope="session")
def sys1d(gen, grid1d):
    return build_lp_system(gen, 8, grid1d)
