# %% [markdown]
# # Fast path, literal sum and least-squares cost pick the same drift
#
# `ml_register` (FFT), `direct_register` (spatial-domain correlation sum) and
# `brute_force_cost_register` (coadd with each candidate, measure the squared
# residual) are three routes to one estimate. On small inputs all three are
# cheap enough to compare candidate by candidate.

# %%
import numpy as np

from driftreg import (
    NoiseSpec,
    SearchRange,
    SequenceSpec,
    brute_force_cost_register,
    direct_register,
    ml_register,
    simulate_sequence,
)

rng = np.random.default_rng(3)
scene = rng.random((16, 16))
seq, true_c = simulate_sequence(SequenceSpec(scene=scene, K=4, noise=NoiseSpec(snr_db=0.0, seed=3), seed=3))
full = SearchRange(full_range=True)

fast = ml_register(seq, full)
literal = direct_register(seq, full)
lsq = brute_force_cost_register(seq, full)
print("truth", tuple(true_c), "| fft", tuple(fast.estimate), "| direct", tuple(literal.estimate), "| lsq", tuple(lsq.estimate))

# %% [markdown]
# The FFT and spatial surfaces agree to rounding error. The least-squares
# cost is an affine function of the same surface:
# cost = E - (E + 2 * objective) / K, where E is the total frame energy.

# %%
print("max |fft - direct|:", np.max(np.abs(fast.objective_surface - literal.objective_surface)))
E = np.sum(seq.frames**2)
K = seq.K
affine = E - (E + 2 * literal.objective_surface) / K
print("max |cost - affine(objective)|:", np.max(np.abs(-lsq.objective_surface - affine)))
