import numpy as np
import pytest

from riscsm.channel import draw_group_signatures_iid, draw_iid
from riscsm.errors import EmptyPilots, IndexOutOfRange
from riscsm.estimation import (
    TrainingConfig,
    collect_pilots,
    estimate_groups,
    mmse_coefficient,
    mmse_estimate,
    theoretical_mse,
)
from riscsm.hadamard import pattern_set
from riscsm.modem import SystemConfig, build_effective_table
from riscsm.numerics import RngStream


def _setup(N=16, N_Q=2, K=4, n_R=2, seed=1):
    cfg = SystemConfig(N, N_Q, K, n_R)
    ps = pattern_set(cfg.n, cfg.K)
    ch = draw_iid(cfg, RngStream(seed))
    return cfg, ps, ch, build_effective_table(ch, ps, cfg)


def test_noiseless_pilots():
    cfg, ps, ch, table = _setup()
    tc = TrainingConfig(4.0, 3)
    z = collect_pilots(ch, ps, 1, 2, tc, RngStream(0), N_Q=cfg.N_Q, noise=False)
    assert z.shape == (3, cfg.n_R)
    assert np.allclose(z, 2.0 * table.groups[1, 2])


def test_pilot_average_converges():
    cfg, ps, ch, table = _setup()
    tc = TrainingConfig(2.0, 10_000)
    z = collect_pilots(ch, ps, 0, 3, tc, RngStream(2), N_Q=cfg.N_Q)
    assert np.max(np.abs(z.mean(axis=0) - np.sqrt(2.0) * table.groups[0, 3])) < 0.05


def test_pilot_index_checks():
    cfg, ps, ch, _ = _setup()
    with pytest.raises(IndexOutOfRange):
        collect_pilots(ch, ps, 2, 0, TrainingConfig(1.0), RngStream(0), N_Q=cfg.N_Q)
    with pytest.raises(IndexOutOfRange):
        collect_pilots(ch, ps, 0, 4, TrainingConfig(1.0), RngStream(0), N_Q=cfg.N_Q)


def test_coefficient_value():
    assert mmse_coefficient(TrainingConfig(1.0, 1), 128, 1) == pytest.approx(128 / 129)


def test_estimate_without_energy_is_prior_mean():
    z = np.ones((2, 3), dtype=complex)
    assert np.array_equal(mmse_estimate(z, TrainingConfig(0.0, 2), 64, 1), np.zeros(3))


def test_estimate_empty_pilots():
    with pytest.raises(EmptyPilots):
        mmse_estimate(np.zeros((0, 2)), TrainingConfig(1.0, 1), 64, 1)


def test_many_pilots_recover_channel():
    cfg, ps, ch, table = _setup()
    tc = TrainingConfig(1.0, 20_000)
    z = collect_pilots(ch, ps, 1, 1, tc, RngStream(3), N_Q=cfg.N_Q)
    assert np.max(np.abs(mmse_estimate(z, tc, cfg.N, cfg.N_Q) - table.groups[1, 1])) < 0.05


def test_theoretical_mse_values():
    assert theoretical_mse(128, 1, 1.0, 1) == pytest.approx(128 / 129)
    assert theoretical_mse(128, 4, 0.0, 3) == 32
    assert all(np.diff([theoretical_mse(64, 2, et, 2) for et in (0.1, 1.0, 10.0)]) < 0)
    assert all(theoretical_mse(64, 2, 1.0, t + 1) < theoretical_mse(64, 2, 1.0, t) for t in range(1, 5))


def test_empirical_mse_and_orthogonality():
    cfg = SystemConfig(64, 2, 4)
    tc = TrainingConfig(0.5, 2)
    groups = draw_group_signatures_iid(cfg, pattern_set(cfg.n, cfg.K), RngStream(4), 20_000)
    est = estimate_groups(groups, tc, cfg, RngStream(5))
    err = est - groups
    assert np.mean(np.abs(err) ** 2) == pytest.approx(theoretical_mse(cfg.N, cfg.N_Q, tc.Et, tc.tau), rel=0.02)
    # the error is uncorrelated with the estimate (normalised correlation coefficient)
    rho = np.mean(err * est.conj()) / np.sqrt(np.mean(np.abs(err) ** 2) * np.mean(np.abs(est) ** 2))
    assert abs(rho) < 0.02


def test_summed_pilot_shortcut_matches_slots():
    # estimate_groups draws the pilot sum directly; compare with explicit slots
    cfg, ps, ch, table = _setup(N=32, N_Q=1, K=4, n_R=1)
    tc = TrainingConfig(0.3, 4)
    slots = np.array(
        [mmse_estimate(collect_pilots(ch, ps, 0, 0, tc, RngStream(10, (i,))), tc, cfg.N, 1) for i in range(20_000)]
    )
    fast = estimate_groups(np.broadcast_to(table.groups, (20_000,) + table.groups.shape), tc, cfg, RngStream(11))
    target = table.groups[0, 0]
    e1 = np.mean(np.abs(slots - target) ** 2)
    e2 = np.mean(np.abs(fast[:, 0, 0] - target) ** 2)
    assert e1 == pytest.approx(e2, rel=0.05)


def test_training_config_db():
    tc = TrainingConfig.from_db(15.0, 2)
    assert tc.Et == pytest.approx(10**1.5) and tc.training_snr_db == pytest.approx(15.0)
