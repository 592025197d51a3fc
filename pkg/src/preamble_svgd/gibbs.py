"""Single-site Gibbs sampler over integer occupancy vectors (MCMC baseline).

Each site update evaluates the exact conditional over ``{0..N}`` using
rank-one updates of the covariance: moving ``x_m`` by ``d`` changes ``Phi``
by ``delta_sq * d * p_m p_m^H``, so the matrix determinant lemma and the
Sherman-Morrison formula give every candidate's likelihood from the cached
``P^H Phi^-1 P`` and ``P^H Phi^-1 Y``.  The caches are rebuilt from a fresh
Cholesky factorization at the start of every sweep.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.stats import binom

from .metrics import Estimate, round_estimate


@dataclass(frozen=True)
class GibbsConfig:
    sweeps: int = 200
    burn_in: int = 50
    prior: str = "binomial"   # or "uniform"

    def __post_init__(self):
        if not 0 <= self.burn_in < self.sweeps:
            raise ValueError("need 0 <= burn_in < sweeps")
        if self.prior not in ("binomial", "uniform"):
            raise ValueError(f"unknown prior {self.prior!r}")


def log_prior(prior: str, N: int, M: int) -> np.ndarray:
    values = np.arange(N + 1)
    if prior == "uniform":
        return np.zeros(N + 1)
    return binom.logpmf(values, N, 1.0 / M)


def _caches(model, x):
    phi = model.covariance(x)
    factor = cho_factor(phi, lower=True)
    G = model.pool.conj().T @ cho_solve(factor, model.pool)
    B = model.pool.conj().T @ cho_solve(factor, model.Y)
    return G, B


def _site_logits(model, x, m, G, B, logprior):
    sc = model.scenario
    c = sc.delta_sq * (np.arange(sc.N + 1) - x[m])
    a = G[m, m].real
    s = float(np.sum(np.abs(B[m]) ** 2))
    denom = 1.0 + c * a
    return c * s / denom - model.K * np.log(denom) + logprior


def move_site(G, B, m: int, c: float) -> None:
    """In-place Sherman-Morrison update of the caches for Phi += c * p_m p_m^H."""
    g = G[:, m].copy()
    scale = c / (1.0 + c * G[m, m].real)
    B -= scale * np.outer(g, B[m])
    G -= scale * np.outer(g, g.conj())


def _normalize(logits):
    w = np.exp(logits - logits.max())
    return w / w.sum()


def gibbs_conditional(model, x, m: int, prior: str = "binomial") -> np.ndarray:
    """Conditional distribution of ``x_m`` over {0..N} given the other sites."""
    x = np.asarray(x, dtype=int)
    G, B = _caches(model, x)
    logprior = log_prior(prior, model.scenario.N, model.scenario.M)
    return _normalize(_site_logits(model, x, m, G, B, logprior))


def run_gibbs(config: GibbsConfig, model, N: int | None, rng: np.random.Generator,
              callback=None) -> Estimate:
    """Rounded posterior mean of the post-burn-in sweeps."""
    sc = model.scenario
    N = sc.N if N is None else N
    if N != sc.N:
        raise ValueError("N must match the scenario's user count")
    M = sc.M
    logprior = log_prior(config.prior, N, M)
    if config.prior == "binomial":
        x = rng.multinomial(N, np.full(M, 1.0 / M)).astype(int)
    else:
        x = rng.integers(0, N + 1, size=M)

    total = np.zeros(M)
    kept = 0
    for sweep in range(config.sweeps):
        G, B = _caches(model, x)
        for m in range(M):
            probs = _normalize(_site_logits(model, x, m, G, B, logprior))
            v = min(int(np.searchsorted(np.cumsum(probs), rng.random() * probs.sum(), side="right")), N)
            if v != x[m]:
                move_site(G, B, m, sc.delta_sq * (v - x[m]))
                x[m] = v
        if callback is not None:
            callback(sweep, x)
        if sweep >= config.burn_in:
            total += x
            kept += 1
    return round_estimate(total[None, :] / kept, N)
