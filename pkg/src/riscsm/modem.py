"""RIS-CSM transceiver: bit mapping, effective channels, ML detection and error counting.

Conventions
-----------
* Indices are 0-based: a supersymbol is ``k = (k_1, ..., k_NQ)`` with
  ``k_q in range(K)``, plus a constellation index ``x in range(M)``.
* Candidates ``(k, x)`` are enumerated lexicographically with ``k_1`` most
  significant and ``x`` least significant. Because K and M are powers of two,
  the candidate number written in binary *is* the transmitted bit block
  (natural binary labels, index sub-blocks first), so bit errors are the
  popcount of ``c XOR c_hat``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np

from .channel import (
    ChannelRealization,
    apply_correlation,
    draw_group_signatures_iid,
    draw_iid,
)
from .errors import ConfigError, DimensionMismatch, LengthMismatch, TooFewSignatures
from .hadamard import PatternSet, is_power_of_two
from .numerics import RngLike, as_generator, sample_cn01

__all__ = [
    "SystemConfig",
    "IndexVector",
    "EffectiveChannelTable",
    "ErrorCounters",
    "qam_constellation",
    "map_bits",
    "demap_bits",
    "build_effective_table",
    "compose_signatures",
    "candidate_points",
    "transmit",
    "ml_detect",
    "ml_detect_batch",
    "simulate_batch",
    "run_error_trials",
    "min_pairwise_distance",
    "snr_db_from_ebno_db",
]


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of one RIS-CSM link.

    ``Es`` is the energy per channel use and ``noise_var`` the receiver noise
    variance, so ``snr = Es / noise_var``. ``M = 1`` is an unmodulated carrier.
    """

    N: int
    N_Q: int
    K: int
    n_R: int = 1
    M: int = 1
    Es: float = 1.0
    noise_var: float = 1.0

    def __post_init__(self):
        for name in ("N", "N_Q", "K", "M"):
            if not is_power_of_two(getattr(self, name)):
                raise ConfigError(f"system.{name}", f"must be a power of two, got {getattr(self, name)}")
        if self.N % self.N_Q or not is_power_of_two(self.N // self.N_Q):
            raise ConfigError("system.N_Q", f"N/N_Q must be a power of two (N={self.N}, N_Q={self.N_Q})")
        if self.K > self.n:
            raise ConfigError("system.K", f"K={self.K} exceeds group size n={self.n}")
        if self.n_R < 1:
            raise ConfigError("system.n_R", f"must be >= 1, got {self.n_R}")
        if self.Es < 0 or self.noise_var < 0:
            raise ConfigError("system", "Es and noise_var must be non-negative")

    @property
    def n(self) -> int:
        return self.N // self.N_Q

    @property
    def index_bits(self) -> int:
        return self.N_Q * int(math.log2(self.K))

    @property
    def mod_bits(self) -> int:
        return int(math.log2(self.M))

    @property
    def rate(self) -> int:
        """Bits per channel use, ``log2(M) + N_Q log2(K)``."""
        return self.index_bits + self.mod_bits

    @property
    def n_supersymbols(self) -> int:
        return self.K**self.N_Q

    @property
    def n_candidates(self) -> int:
        return self.n_supersymbols * self.M

    @property
    def snr(self) -> float:
        if self.noise_var == 0:
            return math.inf
        return self.Es / self.noise_var

    def at_snr_db(self, snr_db: float) -> "SystemConfig":
        """Copy with ``Es = 1`` and the noise variance set for ``snr_db``."""
        return replace(self, Es=1.0, noise_var=10.0 ** (-snr_db / 10.0))


def snr_db_from_ebno_db(ebno_db, rate):
    """``SNR_dB = EbN0_dB + 10 log10(R)``: one channel use carries R bits."""
    return np.asarray(ebno_db, dtype=float) + 10.0 * np.log10(rate)


@dataclass(frozen=True)
class IndexVector:
    k: tuple
    x: int = 0

    def candidate(self, config: SystemConfig) -> int:
        c = 0
        for kq in self.k:
            c = c * config.K + int(kq)
        return c * config.M + int(self.x)

    @classmethod
    def from_candidate(cls, c: int, config: SystemConfig) -> "IndexVector":
        c, x = divmod(int(c), config.M)
        k = []
        for _ in range(config.N_Q):
            c, kq = divmod(c, config.K)
            k.append(kq)
        return cls(tuple(reversed(k)), x)


def qam_constellation(M: int) -> np.ndarray:
    """Unit-average-power QAM alphabet with ``M`` points, in natural label order.

    Even ``log2 M`` gives a square grid; 8 points a 4x2 rectangle; odd
    ``log2 M >= 5`` the cross constellation (a square grid with the four
    corner blocks removed, e.g. 128-QAM from a 12x12 grid). ``M = 1`` is the
    unmodulated carrier ``[1]`` and ``M = 2`` is BPSK.
    """
    if not is_power_of_two(M):
        raise ConfigError("M", f"constellation size must be a power of two, got {M}")
    if M == 1:
        return np.ones(1, dtype=complex)
    if M == 2:
        return np.array([1.0, -1.0], dtype=complex)
    b = int(math.log2(M))
    if b % 2 == 0:
        L = 2 ** (b // 2)
        re, im = np.arange(L), np.arange(L)
        grid = [(i, q) for i in re for q in im]
        side_i, side_q = L, L
    elif b == 3:
        side_i, side_q = 4, 2
        grid = [(i, q) for i in range(4) for q in range(2)]
    else:
        side = 3 * 2 ** ((b - 3) // 2)
        corner = 2 ** ((b - 5) // 2)
        side_i = side_q = side

        def in_corner(i, q):
            return (i < corner or i >= side - corner) and (q < corner or q >= side - corner)

        grid = [(i, q) for i in range(side) for q in range(side) if not in_corner(i, q)]
    pts = np.array([(2 * i - side_i + 1) + 1j * (2 * q - side_q + 1) for i, q in grid])
    assert pts.size == M
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def map_bits(bits, config: SystemConfig) -> IndexVector:
    """Natural binary mapping of an R-bit block to ``(k, x)``.

    The first ``N_Q log2 K`` bits form the index sub-blocks (MSB first), the
    remaining ``log2 M`` bits pick the constellation point.
    """
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size != config.rate:
        raise LengthMismatch(f"expected {config.rate} bits, got {bits.size}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    c = 0
    for b in bits:
        c = 2 * c + int(b)
    return IndexVector.from_candidate(c, config)


def demap_bits(iv: IndexVector, config: SystemConfig) -> np.ndarray:
    c = iv.candidate(config)
    R = config.rate
    return np.array([(c >> (R - 1 - i)) & 1 for i in range(R)], dtype=np.int8)


def compose_signatures(groups: np.ndarray) -> np.ndarray:
    """Sum per-group signatures into all ``K ** N_Q`` supersymbol signatures.

    ``groups`` has shape ``(..., N_Q, K, n_R)``; the result is
    ``(..., K ** N_Q, n_R)`` in lexicographic order of ``k``.
    """
    groups = np.asarray(groups)
    *batch, N_Q, K, n_R = groups.shape
    out = groups[..., 0, :, :]
    for q in range(1, N_Q):
        out = (out[..., :, None, :] + groups[..., q, None, :, :]).reshape(*batch, -1, n_R)
    return out


@dataclass(frozen=True)
class EffectiveChannelTable:
    """Per-group signatures ``d_{k_q}`` (shape ``(..., N_Q, K, n_R)``) and their sums."""

    groups: np.ndarray

    @cached_property
    def signatures(self) -> np.ndarray:
        return compose_signatures(self.groups)

    @property
    def N_Q(self) -> int:
        return self.groups.shape[-3]

    @property
    def K(self) -> int:
        return self.groups.shape[-2]

    @property
    def n_R(self) -> int:
        return self.groups.shape[-1]

    def signature(self, k) -> np.ndarray:
        return self.groups[..., np.arange(self.N_Q), list(k), :].sum(axis=-2)


def build_effective_table(ch: ChannelRealization, patterns: PatternSet, config: SystemConfig) -> EffectiveChannelTable:
    """``d_{k_q} = G_q diag(h_q) s_{k_q}`` for every group and pattern."""
    if ch.N != config.N or ch.n_R != config.n_R or patterns.n != config.n or patterns.K != config.K:
        raise DimensionMismatch("channel, patterns and config disagree on dimensions")
    Gh = ch.G * ch.h[..., None, :]
    Gh = Gh.reshape(ch.batch_shape + (config.n_R, config.N_Q, config.n))
    groups = Gh @ patterns.patterns.T.astype(float)  # (..., n_R, N_Q, K)
    return EffectiveChannelTable(np.moveaxis(groups, -3, -1))


def candidate_points(signatures: np.ndarray, constellation: np.ndarray, Es: float) -> np.ndarray:
    """All noiseless receive vectors ``sqrt(Es) d_k x``, shape ``(..., K**N_Q * M, n_R)``."""
    cand = signatures[..., :, None, :] * np.asarray(constellation)[:, None]
    return np.sqrt(Es) * cand.reshape(*signatures.shape[:-2], -1, signatures.shape[-1])


def transmit(d, x, config: SystemConfig, rng: RngLike) -> np.ndarray:
    """``y = sqrt(Es) d x + n`` with ``n ~ CN(0, noise_var I)``."""
    d = np.asarray(d)
    y = np.sqrt(config.Es) * d * x
    if config.noise_var > 0:
        y = y + np.sqrt(config.noise_var) * sample_cn01(rng, d.shape)
    return y


def ml_detect_batch(y: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Index of the nearest candidate for each received vector.

    ``y`` is ``(B, L)`` and ``candidates`` ``(B, C, L)`` (or ``(C, L)``, shared).
    Ties resolve to the smallest index.
    """
    dist = np.sum(np.abs(y[..., None, :] - candidates) ** 2, axis=-1)
    return np.argmin(dist, axis=-1)


def ml_detect(y, table: EffectiveChannelTable, constellation, config: SystemConfig) -> IndexVector:
    """Exhaustive ML over all ``(k, x)``."""
    cand = candidate_points(table.signatures, constellation, config.Es)
    c = int(ml_detect_batch(np.asarray(y)[None, :], cand[None])[0])
    return IndexVector.from_candidate(c, config)


def min_pairwise_distance(table) -> np.ndarray | float:
    """Smallest ``||d_k - d_k'||`` over unordered pairs of supersymbol signatures.

    Accepts an :class:`EffectiveChannelTable` or a raw ``(..., C, n_R)`` array;
    batched input gives one distance per batch entry.
    """
    sig = table.signatures if isinstance(table, EffectiveChannelTable) else np.asarray(table)
    C = sig.shape[-2]
    if C < 2:
        raise TooFewSignatures(f"need at least two signatures, got {C}")
    iu, ju = np.triu_indices(C, 1)
    d = np.sqrt(np.sum(np.abs(sig[..., iu, :] - sig[..., ju, :]) ** 2, axis=-1))
    out = d.min(axis=-1)
    return float(out) if out.ndim == 0 else out


@dataclass
class ErrorCounters:
    """Monte-Carlo error tallies; ``+`` merges two runs."""

    trials: int = 0
    symbol_errors: int = 0
    group_errors: int = 0
    bit_errors: int = 0
    groups_per_trial: int = 1
    bits_per_trial: int = 1

    def __add__(self, other: "ErrorCounters") -> "ErrorCounters":
        if self.trials and other.trials and (
            (self.groups_per_trial, self.bits_per_trial) != (other.groups_per_trial, other.bits_per_trial)
        ):
            raise ValueError("cannot merge counters of different configurations")
        ref = self if self.trials else other
        return ErrorCounters(
            self.trials + other.trials,
            self.symbol_errors + other.symbol_errors,
            self.group_errors + other.group_errors,
            self.bit_errors + other.bit_errors,
            ref.groups_per_trial,
            ref.bits_per_trial,
        )

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.trials

    @property
    def per_group_ser(self) -> float:
        return self.group_errors / (self.trials * self.groups_per_trial)

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.bits_per_trial)


def _digits(c: np.ndarray, config: SystemConfig) -> np.ndarray:
    """``(..., N_Q)`` group indices of candidate numbers ``c``."""
    k = c // config.M
    out = np.empty(c.shape + (config.N_Q,), dtype=np.int64)
    for q in range(config.N_Q - 1, -1, -1):
        k, out[..., q] = np.divmod(k, config.K)
    return out


def _popcount(v: np.ndarray) -> np.ndarray:
    return np.bitwise_count(v.astype(np.uint64)).astype(np.int64)


def count_errors(c_tx: np.ndarray, c_hat: np.ndarray, config: SystemConfig) -> ErrorCounters:
    group_err = int(np.count_nonzero(_digits(c_tx, config) != _digits(c_hat, config)))
    return ErrorCounters(
        trials=int(c_tx.size),
        symbol_errors=int(np.count_nonzero(c_tx != c_hat)),
        group_errors=group_err,
        bit_errors=int(_popcount(c_tx ^ c_hat).sum()),
        groups_per_trial=config.N_Q,
        bits_per_trial=max(config.rate, 1),
    )


def _true_groups(config, patterns, size, gen, R_sqrt, sampler):
    if sampler == "auto":
        sampler = "full" if R_sqrt is not None else "grouped"
    if sampler == "grouped":
        if R_sqrt is not None:
            raise ValueError("the grouped sampler is exact only for IID channels")
        return draw_group_signatures_iid(config, patterns, gen, size)
    if sampler != "full":
        raise ValueError(f"unknown sampler {sampler!r}")
    ch = draw_iid(config, gen, size=size)
    if R_sqrt is not None:
        ch = apply_correlation(ch, R_sqrt)
    return build_effective_table(ch, patterns, config).groups


# cap on B * C * n_R complex entries held at once during detection
_DETECT_CHUNK = 1 << 21


def simulate_batch(
    config: SystemConfig,
    patterns: PatternSet,
    size: int,
    rng: RngLike,
    *,
    training=None,
    R_sqrt: Optional[np.ndarray] = None,
    sampler: str = "auto",
    constellation: Optional[np.ndarray] = None,
) -> ErrorCounters:
    """Run ``size`` independent trials, each with a fresh channel and uniform ``(k, x)``.

    ``training`` (a :class:`~riscsm.estimation.TrainingConfig`) switches the
    receiver to MMSE-estimated signatures; otherwise CSI is perfect.
    ``sampler`` is ``"full"`` (draw h and G), ``"grouped"`` (exact lumped
    sampler, IID only) or ``"auto"``.
    """
    gen = as_generator(rng)
    const = qam_constellation(config.M) if constellation is None else np.asarray(constellation)
    groups = _true_groups(config, patterns, size, gen, R_sqrt, sampler)
    if training is not None:
        from .estimation import estimate_groups

        groups_rx = estimate_groups(groups, training, config, gen)
    else:
        groups_rx = groups
    C = config.n_candidates
    c_tx = gen.integers(0, C, size=size)
    k_tx = _digits(c_tx, config)
    d_tx = groups[np.arange(size)[:, None], np.arange(config.N_Q)[None, :], k_tx].sum(axis=1)
    y = np.sqrt(config.Es) * d_tx * const[c_tx % config.M][:, None]
    if config.noise_var > 0:
        y = y + np.sqrt(config.noise_var) * sample_cn01(gen, y.shape)

    c_hat = np.empty(size, dtype=np.int64)
    step = max(1, _DETECT_CHUNK // (C * config.n_R))
    for s in range(0, size, step):
        sl = slice(s, s + step)
        sig = compose_signatures(groups_rx[sl])
        cand = candidate_points(sig, const, config.Es)
        c_hat[sl] = ml_detect_batch(y[sl], cand)
    return count_errors(c_tx, c_hat, config)


def run_error_trials(
    config: SystemConfig,
    patterns: PatternSet,
    trials: int,
    rng: RngLike,
    *,
    training=None,
    R_sqrt=None,
    sampler: str = "auto",
    batch_size: int = 20000,
) -> ErrorCounters:
    """Monte-Carlo error counts over ``trials`` channel uses."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    gen = as_generator(rng)
    total = ErrorCounters(groups_per_trial=config.N_Q, bits_per_trial=max(config.rate, 1))
    done = 0
    while done < trials:
        b = min(batch_size, trials - done)
        total = total + simulate_batch(
            config, patterns, b, gen, training=training, R_sqrt=R_sqrt, sampler=sampler
        )
        done += b
    return total
