"""Normalized SVGD with momentum.

On top of the plain Stein direction, each step adds

* a population bias term ``delta = mu * (n*N - sum_i |x_i|_1)`` applied to
  every coordinate, pulling the total particle mass toward ``n*N``;
* RMS normalisation by an exponential average of squared directions;
* weight decay on the normalised direction;
* exponential-average momentum.

State (squared average ``g`` and momentum ``r``) is kept per particle and
per coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec
from .svgd import ParticleSet, check_finite, init_particles, project, svgd_direction


@dataclass(frozen=True)
class NsvgdConfig:
    n: int = 6
    step: float = 0.01
    mu: float = 0.01
    alpha: float = 0.9
    eps: float = 1.0
    gamma: float = 0.9
    weight_decay: float = 0.1
    iterations: int = 500
    init_low: float = 1.0
    init_high: float = 1.1

    def __post_init__(self):
        if self.n < 1 or self.iterations < 0 or self.step < 0:
            raise ValueError(f"invalid NSVGD config: {self}")
        if not (0 <= self.alpha < 1 and 0 <= self.gamma < 1):
            raise ValueError("alpha and gamma must lie in [0, 1)")
        if self.eps <= 0 or self.mu < 0 or self.weight_decay < 0:
            raise ValueError("eps must be positive, mu and weight_decay nonnegative")
        if self.init_low > self.init_high:
            raise ValueError("init_low > init_high")


@dataclass
class NsvgdState:
    g: np.ndarray
    r: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n, M):
        return cls(np.zeros((n, M)), np.zeros((n, M)))


def bias_correction(X, N, mu) -> float:
    X = np.clip(np.asarray(X, dtype=float), 0.0, N)
    return mu * (X.shape[0] * N - X.sum())


def accumulate_squares(g, phi, alpha: float, t: int):
    """Exponential average of squared directions; the first step takes phi**2 as is."""
    if alpha == 0:
        return g
    return alpha * g + (1 - alpha) * phi**2 if t > 1 else phi**2


def normalize(phi, g, eps: float):
    return phi / (eps + np.sqrt(g))


def nsvgd_step(particles: ParticleSet, state: NsvgdState, model, kernel: KernelSpec,
               config: NsvgdConfig):
    """One iteration; returns ``(particles, state, info)``."""
    X = particles.positions
    N = model.scenario.N
    t = state.t + 1

    delta = bias_correction(X, N, config.mu)
    phi = svgd_direction(X, model, kernel)
    raw_norm = float(np.linalg.norm(phi))

    g = accumulate_squares(state.g, phi, config.alpha, t)
    phi = normalize(phi, g, config.eps)

    if config.weight_decay != 0:
        phi = phi - config.weight_decay * X

    r = state.r
    if config.gamma != 0:
        r = config.gamma * r + (1 - config.gamma) * phi if t > 1 else phi
        phi = r

    X_new = X + config.step * phi + delta
    check_finite(X_new, t)
    info = {"delta": delta, "phi_norm": raw_norm}
    return ParticleSet(project(X_new, N), t), NsvgdState(g, r, t), info


def run_nsvgd(config: NsvgdConfig, model, kernel: KernelSpec, rng, callback=None,
              particles: ParticleSet | None = None) -> ParticleSet:
    if particles is None:
        particles = init_particles(config, model.scenario.M, rng)
    state = NsvgdState.zeros(*particles.positions.shape)
    if callback is not None:
        callback(particles, {})
    for _ in range(config.iterations):
        particles, state, info = nsvgd_step(particles, state, model, kernel, config)
        if callback is not None:
            callback(particles, info)
    return particles
