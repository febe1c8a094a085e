# %% [markdown]
# Two comparisons at the link level.
#
# 1. Spatial correlation between RIS elements (sinc model on an 8 x 8 grid):
#    it lowers the error rate for few patterns and raises it for many.
# 2. RIS-CSM against RIS-MIMO, RIS-GSM and RIS-CIM at 4 bits per channel use.

# %%
from riscsm import BaselineConfig, CorrelationSpec, SweepSpec, SystemConfig, run_sweep

# %%
for K in (4, 8, 16):
    out = []
    for corr in (None, CorrelationSpec(8, 8, 0.25), CorrelationSpec(8, 8, 0.5)):
        spec = SweepSpec(
            SystemConfig(64, 1, K), metric="supersymbol-ser", snr=(10, 10, 1),
            trials=100_000, min_errors=10**9, batch_size=50_000, correlation=corr,
        )
        out.append(run_sweep(spec).records[0].value)
    print(f"K={K:2d}  SER iid {out[0]:.2e}  lambda/4 {out[1]:.2e}  lambda/2 {out[2]:.2e}")

# %%
system = SystemConfig(64, 1, 16, n_R=2)
schemes = {
    "ris-csm": None,
    "ris-mimo": BaselineConfig("ris-mimo", M_tx=1, M_ris=16, N_Q=1),
    "ris-gsm": BaselineConfig("ris-gsm", M_tx=4, N_Q=4, N_A=3),
    "ris-cim": BaselineConfig("ris-cim", M_tx=128, W=2, length=2),
}
for name, bc in schemes.items():
    spec = SweepSpec(system, scheme=name, baseline=bc, metric="ber", snr=(-4, 8, 4),
                     trials=200_000, min_errors=300, batch_size=20_000)
    print(f"{name:9s}", "  ".join(f"{r.value:.2e}" for r in run_sweep(spec)))
