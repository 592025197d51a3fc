"""Complex Gaussian likelihood of the received block given preamble occupancy.

Given occupancy ``x`` every antenna column ``y_j`` is CN(0, Phi(x)) with
``Phi(x) = delta_sq * P diag(x) P^H + beta * I``.  The log-likelihood drops the
additive constant.  All evaluators accept a single ``x`` of shape ``(M,)`` or
a stack of shape ``(..., M)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .signal import Scenario


class LikelihoodError(RuntimeError):
    """Phi(x) failed to factorize; cannot happen for x >= 0, beta > 0."""


@dataclass
class LikelihoodModel:
    scenario: Scenario
    pool: np.ndarray
    Y: np.ndarray
    _stacked: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        sc = self.scenario
        self.pool = np.asarray(self.pool, dtype=complex)
        self.Y = np.asarray(self.Y, dtype=complex).reshape(sc.S, -1)
        if self.pool.shape != (sc.S, sc.M):
            raise ValueError(f"pool shape {self.pool.shape} != ({sc.S}, {sc.M})")
        # [Y | P]; one triangular solve whitens both at once.
        self._stacked = np.concatenate([self.Y, self.pool], axis=1)

    @property
    def K(self) -> int:
        return self.Y.shape[1]

    def clamp(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), 0.0, self.scenario.N)

    def covariance(self, x) -> np.ndarray:
        x = self.clamp(x)
        P = self.pool
        S = P.shape[0]
        phi = (P * x[..., None, :]) @ (self.scenario.delta_sq * P.conj().T)
        return phi + self.scenario.beta * np.eye(S)

    def _whiten(self, x):
        """Cholesky factor L of Phi(x) and L^-1 [Y | P]."""
        phi = self.covariance(x)
        try:
            L = np.linalg.cholesky(phi)
        except np.linalg.LinAlgError as exc:
            raise LikelihoodError(f"covariance not positive definite at x={x}") from exc
        return L, np.linalg.solve(L, self._stacked)

    def _value(self, L, Z):
        logdet = 2.0 * np.log(np.diagonal(L, axis1=-2, axis2=-1).real).sum(axis=-1)
        quad = (Z[..., : self.K].real ** 2 + Z[..., : self.K].imag ** 2).sum(axis=(-2, -1))
        return -quad - self.K * logdet

    def _grad(self, Z):
        # p_m^H Phi^-1 y_j = (L^-1 p_m)^H (L^-1 y_j)
        Zy, Zp = Z[..., : self.K], Z[..., self.K:]
        cross = np.swapaxes(Zp.conj(), -2, -1) @ Zy
        grad = (cross.real**2 + cross.imag**2).sum(axis=-1) \
            - self.K * (Zp.real**2 + Zp.imag**2).sum(axis=-2)
        return self.scenario.delta_sq * grad

    def log_likelihood(self, x):
        return self._value(*self._whiten(x))

    def grad_log_likelihood(self, x):
        """d/dx_m = delta_sq * sum_j (|p_m^H Phi^-1 y_j|^2 - p_m^H Phi^-1 p_m)."""
        return self._grad(self._whiten(x)[1])

    def value_and_grad(self, x):
        L, Z = self._whiten(x)
        return self._value(L, Z), self._grad(Z)


def psi(model: LikelihoodModel, x) -> np.ndarray:
    """Signal part of the covariance, without the noise floor."""
    return model.covariance(x) - model.scenario.beta * np.eye(model.scenario.S)


def candidate_grid(M: int, N: int) -> np.ndarray:
    """All of {0..N}^M in lexicographic order."""
    return np.array(list(itertools.product(range(N + 1), repeat=M)), dtype=int).reshape(-1, M)


def ml_bruteforce(model: LikelihoodModel, N: int | None = None, cap: int = 10**6,
                  return_scores: bool = False, chunk: int = 4096):
    """Exact integer maximiser of the log-likelihood by exhaustive search.

    Ties resolve to the lexicographically smallest candidate.
    """
    M = model.scenario.M
    N = model.scenario.N if N is None else N
    if N > model.scenario.N:
        raise ValueError("candidate range exceeds the scenario's user count")
    count = (N + 1) ** M
    if count > cap:
        raise ValueError(f"(N+1)^M = {count} candidates exceeds cap {cap}")
    grid = candidate_grid(M, N)
    scores = np.concatenate([model.log_likelihood(grid[i:i + chunk])
                             for i in range(0, count, chunk)])
    best = grid[int(np.argmax(scores))]
    return (best, scores) if return_scores else best
