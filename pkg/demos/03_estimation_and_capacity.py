# %% [markdown]
# Pilot-based MMSE estimation of the group signatures, and the ergodic
# capacity of the index alphabet with uniform inputs.

# %%
from riscsm import SystemConfig, TrainingConfig, ergodic_capacity, pattern_set, run_sweep, theoretical_mse
from riscsm.harness import SweepSpec
from riscsm.numerics import RngStream

# %%
# empirical MSE per signature entry against N / (E_t N tau + N_Q)
for tau in (1, 4):
    spec = SweepSpec(
        SystemConfig(128, 1, 16),
        metric="mse",
        snr=(-20, 10, 10),
        trials=20_000,
        training=TrainingConfig(1.0, tau),
    )
    for r in run_sweep(spec):
        Et = 10 ** (r.snr_db / 10)
        print(f"tau={tau} E_t={Et:7.2f}  empirical {r.value:.4f}  theory {theoretical_mse(128, 1, Et, tau):.4f}")

# %%
# capacity for a 4 bit/channel-use alphabet, with and without partitioning
for N_Q, K in ((1, 16), (2, 4)):
    for n_R in (1, 2):
        cfg = SystemConfig(128, N_Q, K, n_R=n_R)
        line = []
        for snr_db in (-20, -10, 0, 10):
            est = ergodic_capacity(
                cfg.at_snr_db(snr_db), pattern_set(cfg.n, K), outer_samples=300, inner_samples=200,
                rng=RngStream(3, (N_Q, n_R, snr_db + 100)),
            )
            line.append(f"{est.bpcu:5.2f}")
        print(f"N_Q={N_Q} K={K:2d} n_R={n_R}:", " ".join(line), "bpcu at -20/-10/0/10 dB")
