# %% [markdown]
# # Information backflow
#
# Two orthogonal cat states are evolved through the same reservoir and
# their trace distance is recorded.  Any interval where it grows again
# counts towards the BLP measure; a memoryless reservoir gives zero.
#
# Run with ``python3 notebooks/04_non_markovianity.py`` (about a minute).

# %%
import numpy as np

from catbath.observables import blp_measure, cat_pair_family, trace_distance_series
from catbath.structured_bath import LorentzParams, markov_propagator, structured_propagator

gamma, omega = 1.0, 0.22
t = np.linspace(0, 40, 4001)

# %%
pair = cat_pair_family([10], thetas=(0.0,))[0]
for ratio in (0.01, 3.0):
    prop = structured_propagator(t, LorentzParams(gamma, ratio * gamma, omega))
    d = trace_distance_series(prop, pair)
    print(f"Lambda/gamma={ratio:g}: D(0)={d[0]:.3f}, D(end)={d[-1]:.3f}, min over t={d.min():.3f}")

# %%
for ratio in (0.01, 0.1, 1.0, 3.0):
    prop = structured_propagator(t, LorentzParams(gamma, ratio * gamma, omega))
    n, best = blp_measure(prop, cat_pair_family([5, 10, 20]), t)
    print(f"Lambda/gamma={ratio:>5g}: N = {n:.4f}  (best pair |alpha|^2={best.photons:g}, theta={best.theta:.2f})")
n, _ = blp_measure(markov_propagator(t, gamma / 2, omega), cat_pair_family([10]), t)
print(f"Markov: N = {n}")
