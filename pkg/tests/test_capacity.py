import math

import numpy as np
import pytest
from scipy import integrate

from riscsm.capacity import ergodic_capacity, mutual_information_fixed_channel
from riscsm.errors import CandidateSetTooLarge
from riscsm.hadamard import pattern_set
from riscsm.modem import EffectiveChannelTable, SystemConfig, qam_constellation
from riscsm.numerics import RngStream


def _two_point_mi_quadrature(a, b, noise_var):
    """I(X; Y) for equiprobable X in {a, b} by integration over the complex plane."""

    def pdf(y, c):
        return math.exp(-abs(y - c) ** 2 / noise_var) / (math.pi * noise_var)

    def integrand(im, re, c):
        y = complex(re, im)
        p = pdf(y, c)
        if p == 0.0:
            return 0.0
        mix = 0.5 * (pdf(y, a) + pdf(y, b))
        return p * math.log2(p / mix)

    span = 8 * math.sqrt(noise_var)
    total = 0.0
    for c in (a, b):
        val, _ = integrate.dblquad(
            integrand,
            c.real - span,
            c.real + span,
            c.imag - span,
            c.imag + span,
            args=(c,),
            epsabs=1e-9,
        )
        total += 0.5 * val
    return total


@pytest.mark.parametrize("noise_var", [0.5, 2.0])
def test_two_signature_quadrature(noise_var):
    a, b = 0.8 + 0.3j, -0.4 - 0.5j
    cfg = SystemConfig(2, 1, 2, n_R=1, noise_var=noise_var)
    table = EffectiveChannelTable(np.array([[[a], [b]]]))
    est = mutual_information_fixed_channel(table, qam_constellation(1), cfg, 200_000, RngStream(1))
    assert est == pytest.approx(_two_point_mi_quadrature(a, b, noise_var), abs=0.01)


def test_noiseless_saturates():
    cfg = SystemConfig(16, 2, 4, n_R=1, M=2, noise_var=0.0)
    groups = np.random.default_rng(0).standard_normal((2, 4, 1)) + 0j
    mi = mutual_information_fixed_channel(EffectiveChannelTable(groups), qam_constellation(2), cfg, 10, RngStream(0))
    assert mi == pytest.approx(math.log2(32))


def test_no_signal_is_zero():
    cfg = SystemConfig(16, 1, 4, n_R=2, Es=0.0)
    groups = np.ones((1, 4, 2), dtype=complex)
    assert mutual_information_fixed_channel(EffectiveChannelTable(groups), [1.0], cfg, 500, RngStream(0)) == 0.0


def test_high_snr_capacity():
    cfg = SystemConfig(64, 1, 16, n_R=1).at_snr_db(40.0)
    est = ergodic_capacity(cfg, pattern_set(64, 16), outer_samples=40, inner_samples=100, rng=RngStream(2))
    assert est.bpcu == pytest.approx(4.0, abs=0.02)


def test_capacity_nondecreasing_in_snr():
    cfg = SystemConfig(32, 1, 8, n_R=1)
    ps = pattern_set(32, 8)
    ests = [
        ergodic_capacity(cfg.at_snr_db(s), ps, outer_samples=60, inner_samples=100, rng=RngStream(3, (i,)))
        for i, s in enumerate([-15, -5, 5, 15])
    ]
    for lo, hi in zip(ests, ests[1:]):
        assert hi.bpcu >= lo.bpcu - 2 * math.hypot(lo.std_err, hi.std_err)


def test_candidate_limit():
    cfg = SystemConfig(1024, 4, 16, M=2)
    with pytest.raises(CandidateSetTooLarge):
        ergodic_capacity(cfg, pattern_set(256, 16), outer_samples=1, inner_samples=1)
