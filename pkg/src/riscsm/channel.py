"""Rayleigh channel draws for the Tx-RIS-Rx link and the sinc spatial-correlation model.

Arrays may carry leading batch dimensions: ``h`` is ``(..., N)`` and ``G`` is
``(..., n_R, N)``. RIS elements on an ``n_h x n_v`` grid are numbered row-major,
and groups are contiguous blocks of ``n = N / N_Q`` elements.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidDimensions
from .hadamard import PatternSet
from .numerics import RngLike, as_generator, sample_cn01

__all__ = [
    "ChannelRealization",
    "CorrelationSpec",
    "draw_iid",
    "correlation_matrix",
    "apply_correlation",
    "draw_group_signatures_iid",
]


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        h, G = np.asarray(self.h), np.asarray(self.G)
        if G.ndim < 2 or h.shape[-1] != G.shape[-1] or h.shape[:-1] != G.shape[:-2]:
            raise DimensionMismatch(f"h {h.shape} and G {G.shape} are inconsistent")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "G", G)

    @property
    def N(self) -> int:
        return self.h.shape[-1]

    @property
    def n_R(self) -> int:
        return self.G.shape[-2]

    @property
    def batch_shape(self) -> tuple:
        return self.h.shape[:-1]

    def group(self, q: int, N_Q: int):
        """``(h_q, G_q)`` for the q-th contiguous group (0-based)."""
        n = self.N // N_Q
        sl = slice(q * n, (q + 1) * n)
        return self.h[..., sl], self.G[..., sl]


def draw_iid(config, rng: RngLike, size=None) -> ChannelRealization:
    """IID CN(0, 1) draw of ``h`` (N) and ``G`` (n_R x N).

    ``config`` only needs ``N`` and ``n_R`` attributes. ``size`` adds leading
    batch dimensions.
    """
    gen = as_generator(rng)
    batch = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
    h = sample_cn01(gen, batch + (config.N,))
    G = sample_cn01(gen, batch + (config.n_R, config.N))
    return ChannelRealization(h, G)


@dataclass(frozen=True)
class CorrelationSpec:
    """Uniform planar RIS of ``n_h x n_v`` elements spaced ``spacing`` wavelengths apart."""

    n_h: int
    n_v: int
    spacing: float

    def __post_init__(self):
        if self.n_h < 1 or self.n_v < 1:
            raise InvalidDimensions(f"grid {self.n_h}x{self.n_v} is empty")
        if not self.spacing > 0:
            raise InvalidDimensions(f"spacing must be positive, got {self.spacing}")

    @property
    def N(self) -> int:
        return self.n_h * self.n_v


def correlation_matrix(spec: CorrelationSpec) -> np.ndarray:
    """``R[m, l] = sinc(2 * spacing * |u_m - u_l|)`` with normalized sinc and unit grid pitch."""
    rows, cols = np.divmod(np.arange(spec.N), spec.n_v)
    dr = rows[:, None] - rows[None, :]
    dc = cols[:, None] - cols[None, :]
    dist = np.hypot(dr, dc)
    return np.sinc(2.0 * spec.spacing * dist)


def apply_correlation(ch: ChannelRealization, R_sqrt) -> ChannelRealization:
    """Return ``(R^1/2 h, G R^1/2)``."""
    R_sqrt = np.asarray(R_sqrt)
    if R_sqrt.shape != (ch.N, ch.N):
        raise DimensionMismatch(f"R_sqrt {R_sqrt.shape} does not match N={ch.N}")
    return ChannelRealization(ch.h @ R_sqrt.T, ch.G @ R_sqrt)


def draw_group_signatures_iid(config, patterns: PatternSet, rng: RngLike, size: int) -> np.ndarray:
    """Sample per-group effective channels ``G_q diag(h_q) s_k`` directly, for IID Rayleigh.

    Elements whose pattern columns are identical can be lumped: for a class of
    ``m`` such elements, ``u = sum_j G[:, j] h_j`` is, given ``h``, complex
    Gaussian with per-antenna variance ``W = sum_j |h_j|^2 ~ Gamma(m, 1)`` and
    independent across antennas and classes. Drawing ``W`` then ``u`` reproduces
    the joint law of the full computation exactly while costing one gamma
    variate and ``n_R`` normals per class instead of ``m (n_R + 1)`` normals.

    Returns an array of shape ``(size, N_Q, K, n_R)``.
    """
    if patterns.n * config.N_Q != config.N:
        raise DimensionMismatch(f"pattern length {patterns.n} != N/N_Q = {config.N // config.N_Q}")
    gen = as_generator(rng)
    cols, counts = patterns.column_classes()
    C = counts.size
    if np.all(counts == counts[0]):
        W = gen.standard_gamma(float(counts[0]), size=(size, config.N_Q, C))
    else:
        W = gen.standard_gamma(np.broadcast_to(counts.astype(float), (size, config.N_Q, C)))
    u = sample_cn01(gen, (size, config.N_Q, C, config.n_R)) * np.sqrt(W)[..., None]
    # contract the class axis: (size, N_Q, C, n_R) x (K, C) -> (size, N_Q, K, n_R)
    return np.moveaxis(np.tensordot(u, cols.astype(float), axes=([2], [1])), -1, 2)
