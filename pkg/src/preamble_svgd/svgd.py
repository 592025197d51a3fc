"""Plain SVGD detector.

Particles are relaxed occupancy vectors in [0, N]^M.  Each iteration moves
every particle along the kernelised Stein direction computed from the
previous iterate, then projects back onto the box.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, kernel_matrix


class DivergenceError(FloatingPointError):
    """A particle coordinate became non-finite; usually the step is too large."""


@dataclass
class ParticleSet:
    positions: np.ndarray   # (n, M)
    t: int = 0

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def mean(self) -> np.ndarray:
        return self.positions.mean(axis=0)


@dataclass(frozen=True)
class SvgdConfig:
    n: int = 6
    step: float = 0.01
    iterations: int = 500
    init_low: float = 1.0
    init_high: float = 1.1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one particle")
        if self.step < 0 or self.iterations < 0 or self.init_low > self.init_high:
            raise ValueError(f"invalid SVGD config: {self}")


def init_particles(config, M: int, rng: np.random.Generator) -> ParticleSet:
    return ParticleSet(rng.uniform(config.init_low, config.init_high, size=(config.n, M)))


def project(X, N) -> np.ndarray:
    return np.clip(X, 0.0, N)


def check_finite(X, t):
    if not np.all(np.isfinite(X)):
        raise DivergenceError(f"non-finite particle coordinate at iteration {t}")


def svgd_direction(X, model, kernel: KernelSpec) -> np.ndarray:
    """Stein direction for every particle, shape (n, M).

    phi(x_i) = 1/n sum_l [k(x_l, x_i) grad log q(x_l) + grad_{x_l} k(x_l, x_i)]
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    grads = model.grad_log_likelihood(X)
    h = kernel.bandwidth(X) if n > 1 else 1.0
    Kmat, Kgrad = kernel_matrix(X, h)
    return (Kmat.T @ grads + Kgrad.sum(axis=0)) / n


def svgd_step(particles: ParticleSet, model, kernel: KernelSpec, config) -> ParticleSet:
    X = particles.positions
    phi = svgd_direction(X, model, kernel)
    X_new = X + config.step * phi
    check_finite(X_new, particles.t + 1)
    return ParticleSet(project(X_new, model.scenario.N), particles.t + 1)


def run_svgd(config: SvgdConfig, model, kernel: KernelSpec, rng, callback=None,
             particles: ParticleSet | None = None) -> ParticleSet:
    """Run ``config.iterations`` SVGD steps from a uniform initialisation.

    ``callback(particles, info)`` is invoked after initialisation and after
    every step, e.g. for writing traces.
    """
    if particles is None:
        particles = init_particles(config, model.scenario.M, rng)
    if callback is not None:
        callback(particles, {})
    for _ in range(config.iterations):
        particles = svgd_step(particles, model, kernel, config)
        if callback is not None:
            callback(particles, {})
    return particles
