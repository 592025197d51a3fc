import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from preamble_svgd.kernels import KernelSpec, bandwidth_median, kernel_and_grad, kernel_matrix


def median_oracle(X):
    dists = sorted(math.dist(a, b) for a, b in itertools.combinations(X.tolist(), 2))
    k = len(dists)
    return dists[k // 2] if k % 2 else 0.5 * (dists[k // 2 - 1] + dists[k // 2])


def test_single_pair():
    X = np.array([[0.0, 0.0], [3.0, 4.0]])
    assert bandwidth_median(X) == pytest.approx(25 / math.log(2))


def test_equidistant_six():
    c = 1.7
    X = np.eye(6) * c / math.sqrt(2)
    assert bandwidth_median(X) == pytest.approx(c**2 / math.log(6), rel=1e-12)


def test_random_against_sorted_pairs():
    X = np.random.default_rng(0).uniform(0, 3, (6, 20))
    assert bandwidth_median(X) == pytest.approx(median_oracle(X) ** 2 / math.log(6), abs=1e-12)


def test_degenerate_and_errors():
    assert bandwidth_median(np.ones((4, 3))) == 1.0
    with pytest.raises(ValueError):
        bandwidth_median(np.ones((1, 3)))
    with pytest.raises(ValueError):
        KernelSpec(kind="imq")
    assert KernelSpec(bandwidth_rule="fixed", h=0.3).bandwidth(np.ones((1, 2))) == 0.3


def test_log_base_knob():
    X = np.random.default_rng(1).uniform(0, 1, (6, 3))
    h_e = KernelSpec().bandwidth(X)
    h_10 = KernelSpec(log_base=10.0).bandwidth(X)
    assert h_10 == pytest.approx(h_e * math.log(6) / math.log10(6))


def test_kernel_examples():
    x = np.array([0.3, -1.0, 2.0])
    k, g = kernel_and_grad(x, x, 0.7)
    assert k == 1.0 and np.all(g == 0)
    h = 2.0
    k, _ = kernel_and_grad(np.array([1.0, 1.0]), np.array([0.0, 0.0]), h)
    assert k == pytest.approx(math.exp(-1))


def test_kernel_gradient_finite_differences():
    rng = np.random.default_rng(3)
    a, b, h, eps = rng.normal(size=4), rng.normal(size=4), 1.3, 1e-6
    _, g = kernel_and_grad(a, b, h)
    fd = [(kernel_and_grad(a + eps * e, b, h)[0] - kernel_and_grad(a - eps * e, b, h)[0]) / (2 * eps)
          for e in np.eye(4)]
    np.testing.assert_allclose(g, fd, atol=1e-8)


def test_kernel_matrix_matches_pairwise():
    X = np.random.default_rng(4).normal(size=(5, 3))
    K, G = kernel_matrix(X, 0.9)
    for l in range(5):
        for i in range(5):
            k, g = kernel_and_grad(X[l], X[i], 0.9)
            assert K[l, i] == pytest.approx(k, rel=1e-14)
            np.testing.assert_allclose(G[l, i], g, atol=1e-15)


vec = arrays(np.float64, 3, elements=st.floats(-5, 5))


@given(a=vec, b=vec, h=st.floats(0.05, 20))
def test_kernel_symmetry_and_antisymmetric_gradient(a, b, h):
    kab, gab = kernel_and_grad(a, b, h)
    kba, gba = kernel_and_grad(b, a, h)
    assert kab == kba
    assert 0 <= kab <= 1
    np.testing.assert_allclose(gab, -gba)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=30)
def test_median_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 4, (6, 5))
    assert bandwidth_median(X) == bandwidth_median(X[rng.permutation(6)])
