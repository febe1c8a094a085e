"""Monte-Carlo mutual information and ergodic capacity with uniform discrete inputs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .channel import apply_correlation, draw_iid
from .errors import CandidateSetTooLarge
from .hadamard import PatternSet
from .modem import EffectiveChannelTable, SystemConfig, build_effective_table, candidate_points, qam_constellation
from .numerics import RngLike, as_generator, sample_cn01

__all__ = ["CapacityEstimate", "mutual_information_fixed_channel", "ergodic_capacity", "MAX_CANDIDATES"]

MAX_CANDIDATES = 1 << 16
_CHUNK = 1 << 21


@dataclass(frozen=True)
class CapacityEstimate:
    snr: float
    bpcu: float
    std_err: float
    inner_samples: int
    outer_samples: int


def _mi_from_candidates(cand: np.ndarray, noise_var: float, inner: int, gen) -> float:
    """``log2(C) - E[log2 sum_c' exp((|n|^2 - |y - c'|^2) / noise_var)]`` for one channel."""
    C, n_R = cand.shape
    cap = math.log2(C)
    if noise_var == 0:
        # distinct points are perfectly separable; coincident ones merge
        return math.log2(np.unique(np.round(cand, 12), axis=0).shape[0])
    idx = gen.integers(0, C, size=inner)
    n = np.sqrt(noise_var) * sample_cn01(gen, (inner, n_R))
    y = cand[idx] + n
    n2 = np.sum(np.abs(n) ** 2, axis=1)
    acc = 0.0
    step = max(1, _CHUNK // (C * n_R))
    for s in range(0, inner, step):
        sl = slice(s, s + step)
        dist = np.sum(np.abs(y[sl, None, :] - cand[None]) ** 2, axis=-1)
        acc += logsumexp((n2[sl, None] - dist) / noise_var, axis=1).sum()
    mi = cap - acc / inner / math.log(2)
    return min(max(mi, 0.0), cap)


def mutual_information_fixed_channel(
    table: EffectiveChannelTable,
    constellation,
    config: SystemConfig,
    inner_samples: int,
    rng: RngLike,
) -> float:
    """Mutual information ``I(k, x; y)`` in bits for one channel realization.

    The numerator density uses the sampled noise directly (``|y - sqrt(Es) d_k x| = |n|``).
    Result is clamped to ``[0, log2(M K^N_Q)]``.
    """
    const = np.asarray(constellation)
    C = table.signatures.shape[-2] * const.size
    if C > MAX_CANDIDATES:
        raise CandidateSetTooLarge(f"{C} candidates exceed the limit of {MAX_CANDIDATES}")
    cand = candidate_points(table.signatures, const, config.Es)
    return _mi_from_candidates(cand, config.noise_var, inner_samples, as_generator(rng))


def ergodic_capacity(
    config: SystemConfig,
    patterns: PatternSet,
    R_sqrt: Optional[np.ndarray] = None,
    outer_samples: int = 200,
    inner_samples: int = 200,
    rng: RngLike = None,
) -> CapacityEstimate:
    """Average of :func:`mutual_information_fixed_channel` over fresh channel draws."""
    if config.n_candidates > MAX_CANDIDATES:
        raise CandidateSetTooLarge(f"{config.n_candidates} candidates exceed the limit of {MAX_CANDIDATES}")
    gen = as_generator(rng)
    const = qam_constellation(config.M)
    vals = np.empty(outer_samples)
    for i in range(outer_samples):
        ch = draw_iid(config, gen)
        if R_sqrt is not None:
            ch = apply_correlation(ch, R_sqrt)
        table = build_effective_table(ch, patterns, config)
        vals[i] = mutual_information_fixed_channel(table, const, config, inner_samples, gen)
    se = float(vals.std(ddof=1) / math.sqrt(outer_samples)) if outer_samples > 1 else math.nan
    return CapacityEstimate(config.snr, float(vals.mean()), se, inner_samples, outer_samples)
