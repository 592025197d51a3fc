"""Point estimates from particles and detection-error metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Estimate:
    x_hat: np.ndarray   # integer occupancy estimate
    x_bar: np.ndarray   # real-valued sample mean it was rounded from


def round_half_away(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


def round_estimate(particles, N: int) -> Estimate:
    """Coordinate-wise sample mean rounded to the nearest integer, clamped to {0..N}."""
    X = np.atleast_2d(np.asarray(getattr(particles, "positions", particles), dtype=float))
    x_bar = X.mean(axis=0)
    x_hat = np.clip(round_half_away(x_bar), 0, N).astype(int)
    return Estimate(x_hat, x_bar)


def _stack(estimates, truths):
    if len(estimates) != len(truths):
        raise ValueError(f"{len(estimates)} estimates vs {len(truths)} truths")
    est = [np.asarray(getattr(e, "x_hat", e)) for e in estimates]
    tru = [np.asarray(t) for t in truths]
    for e, t in zip(est, tru):
        if e.shape != t.shape:
            raise ValueError(f"shape mismatch {e.shape} vs {t.shape}")
    if not est:
        raise ValueError("no trials")
    return np.concatenate([e.ravel() for e in est]), np.concatenate([t.ravel() for t in tru])


def p_ade(estimates, truths) -> float:
    """Fraction of (trial, preamble) pairs whose count is wrong."""
    e, t = _stack(estimates, truths)
    return float(np.mean(e != t))


def mse(estimates, truths) -> float:
    e, t = _stack(estimates, truths)
    return float(np.mean((e.astype(float) - t) ** 2))
