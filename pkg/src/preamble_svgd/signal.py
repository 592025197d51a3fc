"""Uplink received-signal model for grant-based random access.

Each of ``N`` active users picks one of ``M`` non-orthogonal preambles of
length ``S`` and transmits it through an independent Rayleigh channel to
each of ``K`` base-station antennas.  The received block is ``Y = P W + noise``
where ``W[m, j]`` aggregates the channel gains of all users on preamble ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Scenario:
    """Dimensions and power levels of one random-access slot."""

    M: int
    S: int
    N: int
    K: int
    delta_sq: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.M < 1 or self.S < 1 or self.K < 0 or self.N < 0:
            raise ValueError(f"invalid scenario dimensions: {self}")
        if not (self.delta_sq > 0 and self.beta > 0):
            raise ValueError("delta_sq and beta must be positive")

    @classmethod
    def from_snr(cls, M, S, N, K, snr_db, delta_sq=1.0):
        return cls(M, S, N, K, delta_sq, delta_sq * 10.0 ** (-snr_db / 10.0))

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.delta_sq / self.beta)

    def with_snr(self, snr_db: float) -> "Scenario":
        return Scenario.from_snr(self.M, self.S, self.N, self.K, snr_db, self.delta_sq)

    def to_text(self) -> str:
        return "".join(f"scenario.{k} = {v!r}\n" for k, v in asdict(self).items())

    @classmethod
    def from_text(cls, text: str) -> "Scenario":
        from .config import parse_config

        cfg = parse_config(text)
        kw = {k.split(".", 1)[1]: v for k, v in cfg.items() if k.startswith("scenario.")}
        if "snr_db" in kw:
            snr = kw.pop("snr_db")
            kw.pop("beta", None)
            return cls.from_snr(snr_db=snr, **kw)
        return cls(**kw)


def crandn(rng: np.random.Generator, shape, var=1.0) -> np.ndarray:
    """CN(0, var) samples: real and imaginary parts i.i.d. N(0, var/2)."""
    scale = math.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_pool(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """S x M preamble matrix with CN(0, 1/S) entries."""
    return crandn(rng, (scenario.S, scenario.M), 1.0 / scenario.S)


def draw_selection(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Preamble index chosen by each user, uniform over the pool."""
    return rng.integers(0, scenario.M, size=scenario.N)


def draw_occupancy(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    return occupancy_from_selection(draw_selection(scenario, rng), scenario.M)


def occupancy_from_selection(selection, M: int) -> np.ndarray:
    return np.bincount(np.asarray(selection, dtype=int), minlength=M).astype(int)


def synthesize(scenario, pool, occupancy, rng, symbols=None) -> np.ndarray:
    """Received S x K matrix for the given occupancy.

    Every user gets its own CN(0, delta_sq) gain per antenna; data symbols
    default to 1.  ``rng`` is split into channel and noise substreams so the
    noise draw does not depend on how many users are active.
    """
    pool = np.asarray(pool)
    x = np.asarray(occupancy, dtype=int)
    if pool.shape != (scenario.S, scenario.M):
        raise ValueError(f"pool shape {pool.shape} != ({scenario.S}, {scenario.M})")
    if x.shape != (scenario.M,):
        raise ValueError(f"occupancy shape {x.shape} != ({scenario.M},)")
    if np.any(x < 0):
        raise ValueError("occupancy must be nonnegative")

    channel_rng, noise_rng = rng.spawn(2)
    n_users = int(x.sum())
    preamble_of_user = np.repeat(np.arange(scenario.M), x)
    H = crandn(channel_rng, (n_users, scenario.K), scenario.delta_sq)
    e = np.ones(n_users) if symbols is None else np.asarray(symbols)
    W = np.zeros((scenario.M, scenario.K), dtype=complex)
    np.add.at(W, preamble_of_user, H * e[:, None])
    noise = crandn(noise_rng, (scenario.S, scenario.K), scenario.beta)
    return pool @ W + noise


def model_covariance(scenario, pool, occupancy) -> np.ndarray:
    """delta_sq * P diag(x) P^H + beta I, the covariance of each column of Y."""
    P = np.asarray(pool)
    x = np.asarray(occupancy, dtype=float)
    return scenario.delta_sq * (P * x) @ P.conj().T + scenario.beta * np.eye(P.shape[0])


def dump_matrix_csv(path, A) -> None:
    """Row-major CSV dump; header line carries the dims, complex entries as re,im pairs."""
    A = np.atleast_2d(np.asarray(A))
    rows, cols = A.shape
    with open(path, "w") as fh:
        fh.write(f"# rows={rows} cols={cols} complex={int(np.iscomplexobj(A))}\n")
        for row in A:
            if np.iscomplexobj(A):
                fh.write(",".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row) + "\n")
            else:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    meta = dict(tok.split("=") for tok in lines[0].lstrip("# ").split())
    rows, cols, is_complex = int(meta["rows"]), int(meta["cols"]), meta["complex"] == "1"
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]) if rows else np.zeros((0, 0))
    if is_complex:
        data = data[:, 0::2] + 1j * data[:, 1::2] if rows else np.zeros((0, cols), complex)
    return data.reshape(rows, cols)
