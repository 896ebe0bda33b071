# %% [markdown]
# # Registration error against SNR and frame count
#
# A reduced Monte-Carlo sweep: 10 trials per cell (use the `driftreg sweep`
# command for full 50-trial runs). Each trial draws a random drift and a
# fresh noise realization from a seed derived from (base seed, SNR, K, trial).

# %%
from driftreg.simulator import SceneSource
from driftreg.sweep import SweepConfig, run_sweep, summarize

config = SweepConfig(
    snr_db_list=[-20.0, -25.0, -30.0, -35.0],
    k_list=[5, 10, 20, 40],
    trials=10,
    scene=SceneSource(shape=(250, 250)),
)
records = run_sweep(config)

# %%
table = {(s.snr_db, s.K): s for s in summarize(records)}
print("mean abs error (px)   " + "".join(f"K={k:<7d}" for k in config.k_list))
for snr in config.snr_db_list:
    print(f"{snr:6.1f} dB             " + "".join(f"{table[snr, k].mean:<9.2f}" for k in config.k_list))
