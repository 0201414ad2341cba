import time
from fractions import Fraction

import pytest

from pilotreuse.channel import ChannelParams, estimate_depth_rates, linear_rate_model
from pilotreuse.lattice import CellGrid
from pilotreuse.wsr2 import TwoGroupConfig

OMEGAS = (Fraction(1, 2), Fraction(3, 5), Fraction(7, 10), Fraction(3, 4), Fraction(4, 5), Fraction(9, 10))


VERDICTS = pytest.StashKey[list]()
MC81_SECONDS = pytest.StashKey[float]()


@pytest.fixture(scope="session")
def mc81(request):
    """Full-scale rate table (100k trials, seed 1), shared by every test that needs it."""
    start = time.perf_counter()
    rates = estimate_depth_rates(CellGrid(4), ChannelParams(3.7, 100_000, 1))
    request.config.stash[MC81_SECONDS] = time.perf_counter() - start
    return rates


@pytest.fixture
def verdict(request, capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}" + (f" | {detail}" if detail else "")
        request.config.stash.setdefault(VERDICTS, []).append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mc_small():
    return {
        9: estimate_depth_rates(CellGrid(2), ChannelParams(3.7, 20_000, 1)),
        27: estimate_depth_rates(CellGrid(3), ChannelParams(3.7, 20_000, 1)),
    }


@pytest.fixture
def table3_cfg():
    return TwoGroupConfig(81, 10, Fraction(1, 5), Fraction(7, 10))


@pytest.fixture
def lin4():
    return linear_rate_model(2, 6, 4)


def two_group_grid(Ls=(9, 27, 81), Kmax=12, omegas=OMEGAS):
    for L in Ls:
        for K in range(2, Kmax + 1):
            for k1 in range(1, K):
                for w in omegas:
                    yield TwoGroupConfig(L, K, Fraction(k1, K), w)
