"""RBF kernel with the median-distance bandwidth rule."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "rbf"
    bandwidth_rule: str = "median"   # "median" or "fixed"
    h: float = 1.0                   # used when bandwidth_rule == "fixed"
    log_base: float = math.e         # base of the log in med^2 / log(n)

    def __post_init__(self):
        if self.kind != "rbf":
            raise ValueError(f"unsupported kernel kind {self.kind!r}")
        if self.bandwidth_rule not in ("median", "fixed"):
            raise ValueError(f"unknown bandwidth rule {self.bandwidth_rule!r}")
        if self.bandwidth_rule == "fixed" and not self.h > 0:
            raise ValueError("fixed bandwidth must be positive")

    def bandwidth(self, particles) -> float:
        if self.bandwidth_rule == "fixed":
            return self.h
        return bandwidth_median(particles, self.log_base)


def bandwidth_median(particles, log_base: float = math.e) -> float:
    """h = med^2 / log(n); falls back to 1 when all particles coincide."""
    X = np.atleast_2d(np.asarray(particles, dtype=float))
    n = X.shape[0]
    if n < 2:
        raise ValueError("median bandwidth needs at least two particles")
    med = float(np.median(pdist(X)))
    if med == 0.0:
        return 1.0
    return med**2 / (math.log(n) / math.log(log_base))


def kernel_and_grad(x_l, x, h: float):
    """k(x_l, x) = exp(-|x_l - x|^2 / h) and its gradient in x_l."""
    diff = np.asarray(x_l, dtype=float) - np.asarray(x, dtype=float)
    k = math.exp(-float(diff @ diff) / h)
    return k, -(2.0 / h) * diff * k


def kernel_matrix(X, h: float):
    """Gram matrix K[l, i] = k(x_l, x_i) and gradients G[l, i] = grad_{x_l} k(x_l, x_i)."""
    X = np.asarray(X, dtype=float)
    diff = X[:, None, :] - X[None, :, :]
    K = np.exp(-(diff**2).sum(axis=-1) / h)
    return K, -(2.0 / h) * diff * K[..., None]
