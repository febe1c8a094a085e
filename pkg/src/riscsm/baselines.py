"""Comparison schemes that also use the RIS as an encoder without beamforming.

* RIS-MIMO: every element of a group reflects a common M_ris-PSK phase.
* RIS-GSM: ``N_A`` of ``N_Q`` groups reflect (all-ones pattern), the rest absorb.
* RIS-CIM: the whole RIS applies one of ``W`` length-``Len`` Walsh spreading codes
  to an ``M_tx``-QAM symbol; each chip uses energy ``Es``.

All receivers are exhaustive joint ML with perfect CSI. Transmitted bits are
labelled index-bits-first; PSK and QAM points carry (quasi-)Gray labels.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import draw_group_signatures_iid, draw_iid
from .errors import InvalidParameters
from .hadamard import is_power_of_two, pattern_set, sylvester
from .modem import ErrorCounters, SystemConfig, ml_detect_batch, qam_constellation
from .numerics import RngLike, as_generator, sample_cn01

__all__ = [
    "SCHEMES",
    "BaselineConfig",
    "gray",
    "psk_constellation",
    "gray_qam",
    "gsm_combinations",
    "spectral_efficiency",
    "ris_mimo_trial",
    "ris_gsm_trial",
    "ris_cim_trial",
    "run_baseline_trials",
]

SCHEMES = ("ris-csm", "ris-mimo", "ris-gsm", "ris-cim")


@dataclass(frozen=True)
class BaselineConfig:
    """Scheme tag plus the parameters that scheme uses; the others are ignored."""

    scheme: str
    M_tx: int = 1
    M_ris: int = 16
    N_Q: int = 1
    N_A: int = 1
    W: int = 2
    length: int = 2
    K: int = 16

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidParameters(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not is_power_of_two(self.M_tx):
            raise InvalidParameters(f"M_tx must be a power of two, got {self.M_tx}")
        if self.scheme == "ris-mimo" and not is_power_of_two(self.M_ris):
            raise InvalidParameters(f"M_ris must be a power of two, got {self.M_ris}")
        if self.scheme == "ris-gsm" and not 1 <= self.N_A <= self.N_Q:
            raise InvalidParameters(f"need 1 <= N_A <= N_Q, got N_A={self.N_A}, N_Q={self.N_Q}")
        if self.scheme == "ris-cim" and not (
            is_power_of_two(self.W) and is_power_of_two(self.length) and self.W <= self.length
        ):
            raise InvalidParameters(f"need powers of two with W <= Len, got W={self.W}, Len={self.length}")
        if self.scheme == "ris-csm" and not is_power_of_two(self.K):
            raise InvalidParameters(f"K must be a power of two, got {self.K}")

    @property
    def index_bits(self) -> int:
        if self.scheme == "ris-mimo":
            return self.N_Q * int(math.log2(self.M_ris))
        if self.scheme == "ris-gsm":
            return int(math.floor(math.log2(math.comb(self.N_Q, self.N_A))))
        if self.scheme == "ris-cim":
            return int(math.log2(self.W))
        return self.N_Q * int(math.log2(self.K))

    @property
    def bits_per_block(self) -> int:
        return self.index_bits + int(math.log2(self.M_tx))


def spectral_efficiency(bconfig: BaselineConfig) -> float:
    """Bits per channel use; RIS-CIM spreads one block over ``Len`` uses."""
    if bconfig.scheme == "ris-cim":
        return bconfig.bits_per_block / bconfig.length
    return float(bconfig.bits_per_block)


def gray(m):
    return np.asarray(m) ^ (np.asarray(m) >> 1)


def psk_constellation(M: int):
    """``(points, labels)`` for M-PSK starting at phase 0, Gray-labelled around the circle."""
    m = np.arange(M)
    return np.exp(2j * np.pi * m / M), gray(m)


def gray_qam(M: int):
    """``(points, labels)`` with unit average power and Gray or quasi-Gray labels.

    Square and rectangular grids get per-axis Gray labels. Cross constellations
    (32, 128, ...) start from a Gray-labelled ``2^a x 2^(a-1)`` rectangle and fold
    the outermost columns onto the empty top and bottom rows, which keeps all
    but a few edge neighbours one bit apart.
    """
    if M <= 2:
        pts = qam_constellation(M)
        return pts, np.arange(M)
    b = int(math.log2(M))
    bi, bq = (b + 1) // 2, b // 2
    Li, Lq = 2**bi, 2**bq
    i, q = np.meshgrid(np.arange(Li), np.arange(Lq), indexing="ij")
    i, q = i.ravel(), q.ravel()
    I = 2.0 * i - Li + 1
    Q = 2.0 * q - Lq + 1
    labels = (gray(i) << bq) | gray(q)
    if b % 2 == 1 and b >= 5:
        # fold columns with |I| > 3 Li / 4 into the rows above/below the square core
        edge = 3 * Li // 4 - 1
        fold = np.abs(I) > edge
        w = Li // 8  # folded columns per side
        # column depth 0 (outermost) -> outer row; q position -> column within the fold
        depth = np.where(I < 0, i, Li - 1 - i)  # 0..w-1
        qa = np.abs(Q)
        qpos = (qa - 1) / 2  # 0..Lq/2-1
        newQ = np.sign(Q) * (Lq - 1 + 2 * (w - depth))
        newI = np.sign(I) * (2 * qpos + 1)
        I = np.where(fold, newI, I)
        Q = np.where(fold, newQ, Q)
    pts = I + 1j * Q
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    order = np.argsort(labels)
    return pts[order], labels[order]


def gsm_combinations(N_Q: int, N_A: int) -> list:
    """The first ``2^floor(log2 C(N_Q, N_A))`` active-group sets in lexicographic order."""
    usable = 2 ** int(math.floor(math.log2(math.comb(N_Q, N_A))))
    return list(itertools.islice(itertools.combinations(range(N_Q), N_A), usable))


def _group_channels(config: SystemConfig, n_groups: int, size: int, gen, sampler: str) -> np.ndarray:
    """``u_q = G_q h_q`` (all elements in phase), shape ``(size, n_groups, n_R)``."""
    cfg = SystemConfig(config.N, n_groups, 1, config.n_R)
    ones = pattern_set(cfg.n, 1)
    if sampler == "full":
        ch = draw_iid(cfg, gen, size=size)
        return (ch.G * ch.h[..., None, :]).reshape(size, cfg.n_R, n_groups, cfg.n).sum(-1).transpose(0, 2, 1)
    return draw_group_signatures_iid(cfg, ones, gen, size)[:, :, 0, :]


def _run(cand: np.ndarray, labels: np.ndarray, noise_var: float, gen, bits: int) -> ErrorCounters:
    size, C, L = cand.shape
    c_tx = gen.integers(0, C, size=size)
    y = cand[np.arange(size), c_tx]
    if noise_var > 0:
        y = y + np.sqrt(noise_var) * sample_cn01(gen, y.shape)
    c_hat = ml_detect_batch(y, cand)
    errs = int(np.count_nonzero(c_hat != c_tx))
    bit_err = int(np.bitwise_count((labels[c_tx] ^ labels[c_hat]).astype(np.uint64)).sum())
    return ErrorCounters(size, errs, errs, bit_err, 1, max(bits, 1))


def _product_labels(index_labels, sym_labels, sym_bits):
    return (np.asarray(index_labels)[:, None] << sym_bits | np.asarray(sym_labels)[None, :]).ravel()


def ris_mimo_trial(config: SystemConfig, bconfig: BaselineConfig, rng: RngLike, size: int = 1, sampler="grouped"):
    gen = as_generator(rng)
    u = _group_channels(config, bconfig.N_Q, size, gen, sampler)
    psk, psk_lab = psk_constellation(bconfig.M_ris)
    sym, sym_lab = gray_qam(bconfig.M_tx)
    # every combination of group phases, first group most significant
    phases = np.array(list(itertools.product(psk, repeat=bconfig.N_Q)))  # (P, N_Q)
    ris_bits = int(math.log2(bconfig.M_ris))
    phase_lab = np.zeros(len(phases), dtype=np.int64)
    for q, lab in enumerate(np.array(list(itertools.product(psk_lab, repeat=bconfig.N_Q))).T):
        phase_lab |= lab << (ris_bits * (bconfig.N_Q - 1 - q))
    d = np.einsum("pq,bqr->bpr", phases, u)  # (size, P, n_R)
    cand = np.sqrt(config.Es) * (d[:, :, None, :] * sym[None, None, :, None]).reshape(size, -1, config.n_R)
    labels = _product_labels(phase_lab, sym_lab, int(math.log2(bconfig.M_tx)))
    return _run(cand, labels, config.noise_var, gen, bconfig.bits_per_block)


def ris_gsm_trial(config: SystemConfig, bconfig: BaselineConfig, rng: RngLike, size: int = 1, sampler="grouped"):
    gen = as_generator(rng)
    u = _group_channels(config, bconfig.N_Q, size, gen, sampler)
    combos = gsm_combinations(bconfig.N_Q, bconfig.N_A)
    mask = np.zeros((len(combos), bconfig.N_Q))
    for c, groups in enumerate(combos):
        mask[c, list(groups)] = 1.0
    sym, sym_lab = gray_qam(bconfig.M_tx)
    d = np.einsum("cq,bqr->bcr", mask, u)
    cand = np.sqrt(config.Es) * (d[:, :, None, :] * sym[None, None, :, None]).reshape(size, -1, config.n_R)
    labels = _product_labels(np.arange(len(combos)), sym_lab, int(math.log2(bconfig.M_tx)))
    return _run(cand, labels, config.noise_var, gen, bconfig.bits_per_block)


def ris_cim_trial(config: SystemConfig, bconfig: BaselineConfig, rng: RngLike, size: int = 1, sampler="grouped"):
    """One block spans ``Len`` chips; the channel is constant over the block."""
    gen = as_generator(rng)
    d = _group_channels(config, 1, size, gen, sampler)[:, 0, :]  # (size, n_R)
    codes = sylvester(bconfig.length)[: bconfig.W].astype(float)  # (W, Len)
    sym, sym_lab = gray_qam(bconfig.M_tx)
    # candidate (w, x): stacked chips, shape (size, W*M, Len*n_R)
    cw = codes[:, None, :, None] * sym[None, :, None, None]  # (W, M, Len, 1)
    cand = np.sqrt(config.Es) * cw[None] * d[:, None, None, None, :]
    cand = cand.reshape(size, bconfig.W * bconfig.M_tx, bconfig.length * config.n_R)
    labels = _product_labels(np.arange(bconfig.W), sym_lab, int(math.log2(bconfig.M_tx)))
    return _run(cand, labels, config.noise_var, gen, bconfig.bits_per_block)


_TRIALS = {"ris-mimo": ris_mimo_trial, "ris-gsm": ris_gsm_trial, "ris-cim": ris_cim_trial}


def run_baseline_trials(
    config: SystemConfig, bconfig: BaselineConfig, trials: int, rng: RngLike, batch_size: int = 20000, sampler="grouped"
) -> ErrorCounters:
    if bconfig.scheme not in _TRIALS:
        raise InvalidParameters(f"{bconfig.scheme!r} is not a baseline scheme")
    gen = as_generator(rng)
    fn = _TRIALS[bconfig.scheme]
    total = ErrorCounters(bits_per_trial=max(bconfig.bits_per_block, 1))
    done = 0
    while done < trials:
        b = min(batch_size, trials - done)
        total = total + fn(config, bconfig, gen, b, sampler=sampler)
        done += b
    return total
