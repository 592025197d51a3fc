import numpy as np
import pytest
from collections import Counter

from preamble_svgd.gibbs import (GibbsConfig, _caches, gibbs_conditional, log_prior, move_site,
                                 run_gibbs)
from preamble_svgd.likelihood import LikelihoodModel, ml_bruteforce
from preamble_svgd.signal import Scenario, generate_pool

from conftest import make_model


def brute_conditional(model, x, m, prior):
    N = model.scenario.N
    lp = log_prior(prior, N, model.scenario.M)
    logits = []
    for v in range(N + 1):
        z = np.array(x, dtype=float)
        z[m] = v
        logits.append(model.log_likelihood(z) + lp[v])
    w = np.exp(np.array(logits) - max(logits))
    return w / w.sum()


@pytest.mark.parametrize("prior", ["uniform", "binomial"])
def test_conditional_matches_joint_restriction(prior):
    for seed in range(5):
        model, x = make_model(2, 3, 3, 6, snr_db=8.0, seed=seed)
        for m in range(2):
            tv = 0.5 * np.abs(gibbs_conditional(model, x, m, prior)
                              - brute_conditional(model, x, m, prior)).sum()
            assert tv < 1e-10


def test_rank_one_moves_track_fresh_caches():
    model, x = make_model(6, 4, 8, 10, seed=1)
    x = x.copy()
    G, B = _caches(model, x)
    rng = np.random.default_rng(0)
    for _ in range(30):
        m, v = rng.integers(6), rng.integers(9)
        move_site(G, B, m, model.scenario.delta_sq * (v - x[m]))
        x[m] = v
    G0, B0 = _caches(model, x)
    np.testing.assert_allclose(G, G0, atol=1e-9)
    np.testing.assert_allclose(B, B0, atol=1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        GibbsConfig(sweeps=10, burn_in=10)
    with pytest.raises(ValueError):
        GibbsConfig(prior="jeffreys")


def test_no_data_uniform_prior_mean():
    sc = Scenario(3, 2, 6, 0)
    model = LikelihoodModel(sc, generate_pool(sc, np.random.default_rng(0)), np.zeros((2, 0)))
    est = run_gibbs(GibbsConfig(sweeps=3000, burn_in=10, prior="uniform"), model, 6,
                    np.random.default_rng(1))
    np.testing.assert_allclose(est.x_bar, 3.0, atol=0.25)


def test_chain_stays_in_range():
    model, _ = make_model(5, 4, 6, 8, seed=2)
    states = []
    run_gibbs(GibbsConfig(sweeps=30, burn_in=5), model, 6, np.random.default_rng(0),
              callback=lambda s, x: states.append(x.copy()))
    states = np.array(states)
    assert states.min() >= 0 and states.max() <= 6 and len(states) == 30


def _chain(model, sweeps, seed, burn_in=50):
    samples = []
    run_gibbs(GibbsConfig(sweeps=sweeps, burn_in=burn_in, prior="uniform"), model,
              model.scenario.N, np.random.default_rng(seed),
              callback=lambda s, x: s >= burn_in and samples.append(tuple(int(v) for v in x)))
    return Counter(samples)


def test_posterior_mode_matches_ml_at_high_snr():
    agree = 0
    trials = 40
    for seed in range(trials):
        model, _ = make_model(2, 4, 4, 20, snr_db=25.0, seed=seed)
        mode = _chain(model, 5000, seed).most_common(1)[0][0]
        agree += mode == tuple(ml_bruteforce(model))
    assert agree >= 0.95 * trials


def test_chain_histogram_matches_exact_posterior():
    model, _ = make_model(2, 3, 4, 6, snr_db=5.0, seed=12)
    _, scores = ml_bruteforce(model, return_scores=True)
    exact = np.exp(scores - scores.max())
    exact /= exact.sum()
    counts = _chain(model, 20_000, 0)
    total = sum(counts.values())
    empirical = np.array([counts.get((a, b), 0) / total for a in range(5) for b in range(5)])
    assert 0.5 * np.abs(empirical - exact).sum() < 0.03


def test_deterministic_given_seed():
    model, _ = make_model(5, 4, 6, 8, seed=2)
    a = run_gibbs(GibbsConfig(sweeps=20, burn_in=5), model, 6, np.random.default_rng(3))
    b = run_gibbs(GibbsConfig(sweeps=20, burn_in=5), model, 6, np.random.default_rng(3))
    np.testing.assert_array_equal(a.x_bar, b.x_bar)
