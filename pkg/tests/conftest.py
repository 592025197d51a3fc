import numpy as np
import pytest

from preamble_svgd.likelihood import LikelihoodModel
from preamble_svgd.signal import Scenario, draw_occupancy, generate_pool, synthesize


def make_model(M, S, N, K, snr_db=10.0, seed=0, x=None):
    rng = np.random.default_rng(seed)
    sc = Scenario.from_snr(M, S, N, K, snr_db)
    P = generate_pool(sc, rng)
    x = draw_occupancy(sc, rng) if x is None else np.asarray(x)
    Y = synthesize(sc, P, x, rng)
    return LikelihoodModel(sc, P, Y), x


@pytest.fixture
def small_model():
    return make_model(5, 4, 6, 8, snr_db=10.0, seed=3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
