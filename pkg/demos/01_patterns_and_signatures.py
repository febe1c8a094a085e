# %% [markdown]
# Reflection patterns, bit mapping and detection on one channel draw.
#
# Each group of n RIS elements picks one of K rows of a Sylvester-Hadamard
# matrix. Bits choose the rows; the receiver sees the sum of the group
# contributions and decides by exhaustive nearest-neighbour search.

# %%
import numpy as np

from riscsm import RngStream, SystemConfig, draw_iid, ml_detect, pattern_set
from riscsm.hadamard import difference_profile
from riscsm.modem import build_effective_table, map_bits, min_pairwise_distance, qam_constellation, transmit

# %%
ps = pattern_set(16, 4)
for k, row in enumerate(ps.patterns):
    print(f"bits {k:02b} -> {''.join('+' if v > 0 else '-' for v in row)}")

# any two distinct patterns disagree on exactly half the elements
print("difference profile of patterns 0 and 1:", difference_profile(ps, 0, 1))

# %%
cfg = SystemConfig(N=64, N_Q=2, K=4, n_R=2, M=2).at_snr_db(0.0)
print("rate:", cfg.rate, "bits per channel use,", cfg.n_candidates, "candidates")

ch = draw_iid(cfg, RngStream(2024))
table = build_effective_table(ch, pattern_set(cfg.n, cfg.K), cfg)
print("closest pair of signatures:", round(min_pairwise_distance(table), 3))

# %%
const = qam_constellation(cfg.M)
bits = np.array([1, 0, 1, 1, 0])
iv = map_bits(bits, cfg)
y = transmit(table.signature(iv.k), const[iv.x], cfg, RngStream(2024, (1,)))
print("sent", iv, "detected", ml_detect(y, table, const, cfg))
