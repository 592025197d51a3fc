import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from preamble_svgd.metrics import mse, p_ade, round_estimate


def test_round_examples():
    v = np.array([2, 0, 3])
    assert round_estimate(np.tile(v, (4, 1)), 4).x_hat.tolist() == [2, 0, 3]
    est = round_estimate(np.array([[1.5, 0.49, 4.51]]), 4)
    assert est.x_hat.tolist() == [2, 0, 4]
    assert round_estimate(np.array([[2.5, 0.5]]), 4).x_hat.tolist() == [3, 1]


def test_round_matches_scalar_loop():
    X = np.random.default_rng(0).uniform(0, 5, (6, 10))
    expected = []
    for m in range(10):
        total = 0.0
        for i in range(6):
            total += X[i, m]
        mean = total / 6
        expected.append(min(max(int(mean + 0.5), 0), 4))
    assert round_estimate(X, 4).x_hat.tolist() == expected


def test_metric_examples():
    t = [np.array([1, 2, 0, 3])]
    assert p_ade(t, t) == 0.0 and mse(t, t) == 0.0
    assert p_ade([np.array([1, 0, 1, 3])], t) == 0.5
    truth = np.ones(20, int)
    est = truth.copy()
    est[4] = 3
    assert mse([est], [truth]) == pytest.approx(0.2)


def test_metrics_match_recount():
    rng = np.random.default_rng(1)
    truths = [rng.integers(0, 4, 20) for _ in range(500)]
    ests = [np.clip(t + rng.integers(-1, 2, 20) * (rng.random(20) < 0.3), 0, 20) for t in truths]
    wrong = sq = count = 0
    for e, t in zip(ests, truths):
        for a, b in zip(e, t):
            wrong += a != b
            sq += (a - b) ** 2
            count += 1
    assert p_ade(ests, truths) == wrong / count
    assert mse(ests, truths) == pytest.approx(sq / count, rel=1e-15)


def test_length_mismatch():
    with pytest.raises(ValueError):
        p_ade([np.zeros(3)], [])
    with pytest.raises(ValueError):
        mse([np.zeros(3)], [np.zeros(4)])


@given(seed=st.integers(0, 10_000), trials=st.integers(1, 20), M=st.integers(1, 10))
@settings(max_examples=50)
def test_metric_invariants(seed, trials, M):
    rng = np.random.default_rng(seed)
    truths = [rng.integers(0, 4, M) for _ in range(trials)]
    ests = [np.where(rng.random(M) < 0.2, rng.integers(0, 4, M), t) for t in truths]
    exact = all(np.array_equal(e, t) for e, t in zip(ests, truths))
    assert (p_ade(ests, truths) == 0) == exact
    assert (mse(ests, truths) == 0) == exact
    perm = rng.permutation(M)
    assert p_ade([e[perm] for e in ests], [t[perm] for t in truths]) == p_ade(ests, truths)
    assert 0 <= p_ade(ests, truths) <= 1
