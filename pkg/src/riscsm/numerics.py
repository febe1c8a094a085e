"""Random streams, complex Gaussian sampling and small dense linear-algebra helpers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .errors import IndefiniteMatrix, NotHermitian

__all__ = [
    "RngStream",
    "as_generator",
    "sample_cn01",
    "psd_sqrt",
    "gaussian_tail_q",
]


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by a master seed and a stream key.

    The key is a tuple of non-negative integers (e.g. ``(snr_index, batch_index)``).
    Each stream drives a counter-based Philox generator whose key is derived
    from ``(seed, key)`` through :class:`numpy.random.SeedSequence`, so the
    samples depend only on the pair and never on the order streams are used in.
    """

    seed: int
    key: tuple = ()

    def __post_init__(self):
        if isinstance(self.key, (int, np.integer)):
            object.__setattr__(self, "key", (int(self.key),))
        else:
            object.__setattr__(self, "key", tuple(int(k) for k in self.key))

    def substream(self, *key) -> "RngStream":
        return RngStream(self.seed, self.key + tuple(int(k) for k in key))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed), spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))


RngLike = Union[RngStream, np.random.Generator, int, None]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Coerce ``rng`` to a numpy Generator.

    An :class:`RngStream` yields a fresh generator on every call, so two calls
    with the same stream give bit-identical samples. A Generator is passed through.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(0 if rng is None else int(rng)).generator()


def sample_cn01(rng: RngLike, count) -> np.ndarray:
    """Draw IID circularly-symmetric CN(0, 1) samples.

    ``count`` may be an int or a shape tuple. Real and imaginary parts are
    independent N(0, 1/2).
    """
    gen = as_generator(rng)
    shape = (count,) if np.isscalar(count) else tuple(count)
    if any(s < 1 for s in shape):
        raise ValueError(f"count must be >= 1, got {count}")
    z = gen.standard_normal(shape + (2,))
    z *= np.sqrt(0.5)
    # interleaved (re, im) pairs reinterpret as complex without a copy
    return z.view(np.complex128)[..., 0]


def psd_sqrt(R, tol: float = 1e-12) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol * max_eig, 0)`` are clamped to zero; anything more
    negative raises :class:`IndefiniteMatrix`.
    """
    R = np.asarray(R)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {R.shape}")
    scale = max(1.0, float(np.max(np.abs(R)))) if R.size else 1.0
    if np.max(np.abs(R - R.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    Rh = 0.5 * (R + R.conj().T)
    w, V = np.linalg.eigh(Rh)
    wmax = max(float(w[-1]), 0.0)
    # eigh itself is only accurate to ~n*eps*|R|, so the clamp threshold never
    # goes below that floor
    floor = max(tol * wmax, 10 * R.shape[0] * np.finfo(float).eps * scale)
    if w[0] < -floor:
        raise IndefiniteMatrix(f"eigenvalue {w[0]:.3e} below -{floor:.3e}")
    w = np.clip(w, 0.0, None)
    S = (V * np.sqrt(w)) @ V.conj().T
    S = 0.5 * (S + S.conj().T)
    if np.isrealobj(R):
        S = S.real
    return S


def gaussian_tail_q(x):
    """Gaussian Q-function, ``P[N(0,1) > x]``."""
    return special.ndtr(-np.asarray(x, dtype=float))
