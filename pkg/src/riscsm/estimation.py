"""MMSE estimation of per-group effective channels from repeated pilots.

While group q is trained, the transmitter sends ``x = 1`` with energy ``E_t``
for ``tau`` slots and every other group reflects nothing, so each slot sees
``z_i = sqrt(E_t) d_{k_q} + w_i`` with ``w_i ~ CN(0, I)``. The prior variance
of each entry of ``d_{k_q}`` is ``n = N / N_Q``, which makes the MMSE estimator
a scalar shrinkage of the pilot sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .errors import ConfigError, EmptyPilots, IndexOutOfRange
from .hadamard import PatternSet
from .numerics import RngLike, as_generator, sample_cn01

__all__ = [
    "TrainingConfig",
    "collect_pilots",
    "mmse_coefficient",
    "mmse_estimate",
    "theoretical_mse",
    "estimate_groups",
]


@dataclass(frozen=True)
class TrainingConfig:
    Et: float
    tau: int = 1

    def __post_init__(self):
        if self.tau < 1:
            raise ConfigError("estimation.tau", f"must be >= 1, got {self.tau}")
        if self.Et < 0:
            raise ConfigError("estimation.Et", f"must be >= 0, got {self.Et}")

    @classmethod
    def from_db(cls, training_snr_db: float, tau: int = 1) -> "TrainingConfig":
        return cls(10.0 ** (training_snr_db / 10.0), tau)

    @property
    def training_snr_db(self) -> float:
        return 10.0 * math.log10(self.Et) if self.Et > 0 else -math.inf


def collect_pilots(
    ch: ChannelRealization,
    patterns: PatternSet,
    q: int,
    k: int,
    tconfig: TrainingConfig,
    rng: RngLike,
    *,
    N_Q: int = 1,
    noise: bool = True,
) -> np.ndarray:
    """``tau`` observations of group ``q`` reflecting pattern ``k``; shape ``(tau, n_R)``."""
    if not 0 <= q < N_Q:
        raise IndexOutOfRange(f"group {q} outside 0..{N_Q - 1}")
    if not 0 <= k < patterns.K:
        raise IndexOutOfRange(f"pattern {k} outside 0..{patterns.K - 1}")
    h_q, G_q = ch.group(q, N_Q)
    d = G_q @ (h_q * patterns[k])
    z = np.sqrt(tconfig.Et) * np.broadcast_to(d, (tconfig.tau, d.shape[-1]))
    if noise:
        z = z + sample_cn01(rng, z.shape)
    return z


def mmse_coefficient(tconfig: TrainingConfig, N: int, N_Q: int) -> float:
    """Weight applied to the pilot sum, ``sqrt(E_t) N / (E_t N tau + N_Q)``."""
    return math.sqrt(tconfig.Et) * N / (tconfig.Et * N * tconfig.tau + N_Q)


def mmse_estimate(pilots, tconfig: TrainingConfig, N: int, N_Q: int) -> np.ndarray:
    pilots = np.asarray(pilots)
    if pilots.ndim == 0 or pilots.shape[0] == 0:
        raise EmptyPilots("no pilot observations")
    if pilots.shape[0] != tconfig.tau:
        raise EmptyPilots(f"expected tau={tconfig.tau} pilots, got {pilots.shape[0]}")
    return mmse_coefficient(tconfig, N, N_Q) * pilots.sum(axis=0)


def theoretical_mse(N: int, N_Q: int, Et: float, tau: int) -> float:
    """Per-component MSE of the estimator, ``N / (E_t N tau + N_Q)``."""
    return N / (Et * N * tau + N_Q)


def estimate_groups(groups: np.ndarray, tconfig: TrainingConfig, config, rng: RngLike) -> np.ndarray:
    """MMSE estimates of every ``d_{k_q}`` in a ``(..., N_Q, K, n_R)`` table.

    Uses ``N_Q * K`` training rounds of ``tau`` slots. The pilot sum is drawn
    directly as ``tau sqrt(E_t) d + sqrt(tau) w`` with ``w ~ CN(0, I)``, which is
    the same law as summing ``tau`` separate observations.
    """
    gen = as_generator(rng)
    tau = tconfig.tau
    zsum = tau * np.sqrt(tconfig.Et) * groups + np.sqrt(tau) * sample_cn01(gen, groups.shape)
    return mmse_coefficient(tconfig, config.N, config.N_Q) * zsum
