"""Closed-form error-probability expressions for RIS-CSM under IID Rayleigh fading.

Everything here is a function of ``(N, N_Q, K, n_R, snr)`` with ``snr = Es / noise_var``
in linear units. The per-group SER union bound is

    P_e <~ K^(N_Q-1) / (K^N_Q - 1) * sum_z C(N_Q, z) (K-1)^(z+1) F(z)

where ``z`` is the number of groups in which two supersymbols differ and
``F(z)`` the Rayleigh-averaged pairwise error probability of such a pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ConfigError, OutOfSupport
from .hadamard import is_power_of_two

__all__ = [
    "BoundInputs",
    "truncated_binomial_pmf",
    "mu_zeta",
    "f_zeta",
    "f_zeta_integral",
    "ser_union_bound",
    "ser_union_bound_via_pmf",
    "ber_approx",
    "asymptotic_constant",
    "asymptotic_ser",
    "partition_penalty_ratio",
]


@dataclass(frozen=True)
class BoundInputs:
    N: int
    N_Q: int
    K: int
    n_R: int
    snr: float

    def __post_init__(self):
        for name in ("N", "N_Q", "K"):
            if not is_power_of_two(getattr(self, name)):
                raise ConfigError(name, f"must be a power of two, got {getattr(self, name)}")
        if self.N % self.N_Q or self.K > self.N // self.N_Q:
            raise ConfigError("K", "need N_Q | N and K <= N / N_Q")
        if self.n_R < 1 or self.snr < 0:
            raise ConfigError("n_R", "need n_R >= 1 and snr >= 0")

    @classmethod
    def from_config(cls, config, snr=None) -> "BoundInputs":
        return cls(config.N, config.N_Q, config.K, config.n_R, config.snr if snr is None else snr)

    @property
    def n(self) -> int:
        return self.N // self.N_Q


def truncated_binomial_pmf(N_Q: int, K: int, zeta: int) -> float:
    """``P[zeta]`` for the number of differing groups between two distinct supersymbols."""
    if not 1 <= zeta <= N_Q:
        raise OutOfSupport(f"zeta={zeta} outside 1..{N_Q}")
    return math.comb(N_Q, zeta) * (K - 1) ** zeta / (K**N_Q - 1)


def _gamma_bar(zeta, inp: BoundInputs):
    return inp.snr * zeta * inp.N / (2.0 * inp.N_Q)


def mu_zeta(zeta, inp: BoundInputs) -> float:
    g = _gamma_bar(zeta, inp)
    return math.sqrt(g / (1.0 + g)) if math.isfinite(g) else 1.0


def _log_f_zeta(zeta, inp: BoundInputs) -> float:
    g = _gamma_bar(zeta, inp)
    if math.isinf(g):
        return -math.inf
    mu = math.sqrt(g / (1.0 + g))
    # 1 - mu without cancellation
    one_minus_mu = 1.0 / ((1.0 + g) * (1.0 + mu))
    p = (1.0 + mu) / 2.0
    s = sum(math.comb(inp.n_R - 1 + k, k) * p**k for k in range(inp.n_R))
    return inp.n_R * math.log(one_minus_mu / 2.0) + math.log(s)


def f_zeta(zeta, inp: BoundInputs) -> float:
    """Average PEP for a pair differing in ``zeta`` groups (Rayleigh, MRC-type closed form)."""
    return math.exp(_log_f_zeta(zeta, inp))


def f_zeta_integral(zeta, inp: BoundInputs, epsabs: float = 1e-13) -> float:
    """``F(zeta)`` from its finite-range integral form; an independent check of :func:`f_zeta`."""
    g = _gamma_bar(zeta, inp)

    def integrand(theta):
        s2 = math.sin(theta) ** 2
        return (s2 / (s2 + g)) ** inp.n_R

    val, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=epsabs, epsrel=1e-12, limit=200)
    return val / math.pi


def ser_union_bound(inp: BoundInputs) -> float:
    """Per-group SER union bound, summed in the log domain so extreme SNR does not underflow."""
    K, N_Q = inp.K, inp.N_Q
    if K == 1:
        return 0.0
    logs = [
        math.log(math.comb(N_Q, z)) + (z + 1) * math.log(K - 1) + _log_f_zeta(z, inp)
        for z in range(1, N_Q + 1)
    ]
    lead = (N_Q - 1) * math.log(K) - math.log(K**N_Q - 1)
    return float(math.exp(lead + special.logsumexp(logs)))


def ser_union_bound_via_pmf(inp: BoundInputs) -> float:
    """Same bound assembled as ``(K-1) K^(N_Q-1) E_zeta[F(zeta)]`` with the truncated binomial."""
    K, N_Q = inp.K, inp.N_Q
    if K == 1:
        return 0.0
    avg_pep = sum(truncated_binomial_pmf(N_Q, K, z) * f_zeta(z, inp) for z in range(1, N_Q + 1))
    return (K - 1) * K ** (N_Q - 1) * avg_pep


def ber_approx(inp: BoundInputs) -> float:
    return ser_union_bound(inp) / 2.0


def asymptotic_constant(N_Q: int, K: int, n_R: int) -> float:
    """The constant ``c`` in ``P_e ~ c (2 N snr / N_Q)^(-n_R)``."""
    s = sum(math.comb(N_Q, z) * (K - 1) ** z * z ** (-n_R) for z in range(1, N_Q + 1))
    return (K - 1) * K ** (N_Q - 1) / (2.0 * (K**N_Q - 1)) * math.comb(2 * n_R, n_R) * s


def asymptotic_ser(inp: BoundInputs):
    """High-SNR approximation of the bound.

    Returns ``(P_e, diversity_order, coding_gain)`` with
    ``P_e = (G_c snr)^(-n_R)`` and ``G_c = (2N/N_Q) c^(-1/n_R)``.
    """
    c = asymptotic_constant(inp.N_Q, inp.K, inp.n_R)
    gain = 2.0 * inp.N / inp.N_Q * c ** (-1.0 / inp.n_R)
    with np.errstate(divide="ignore"):
        pe = float(np.power(gain * inp.snr, -float(inp.n_R))) if inp.snr > 0 else math.inf
    return pe, inp.n_R, gain


def partition_penalty_ratio(n_R: int, N_Q: int, K1: int) -> float:
    """Asymptotic SER ratio of an ``N_Q``-group system to the single-group one at equal rate.

    The single-group system uses ``K1 ** N_Q`` patterns.
    """
    s = sum(math.comb(N_Q, z) * (K1 - 1) ** z * z ** (-n_R) for z in range(1, N_Q + 1))
    return N_Q**n_R * (K1 - 1) * K1 ** (N_Q - 1) / (K1**N_Q - 1) ** 2 * s
