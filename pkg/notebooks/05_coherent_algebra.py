# %% [markdown]
# # Density matrices on coherent-state labels
#
# States that are finite sums of multimode coherent states never need a
# Fock truncation: the spectrum follows from the Gram matrix of the labels.
# Here we check a few textbook values.
#
# Run with ``python3 notebooks/05_coherent_algebra.py``.

# %%
import numpy as np

from catbath.coherent import CoherentMixture, purity_defect, spectrum, trace_distance, von_neumann_entropy

u = np.sqrt(10)
even = CoherentMixture.pure([u, -u], [1, 1])
odd = CoherentMixture.pure([u, -u], [1, -1])
mixed = CoherentMixture([u, -u], np.diag([0.5, 0.5]))

# %%
print("even cat spectrum:", np.round(spectrum(even.normalized()), 12))
print("even cat <n>:", round(even.normalized().photon_number(), 6), "(u^2 tanh u^2 =", round(u**2 * np.tanh(u**2), 6), ")")
print("classical mixture entropy (bits):", round(von_neumann_entropy(mixed.normalized()), 6))
print("classical mixture purity defect:", round(purity_defect(mixed.normalized()), 6))
print("even vs odd trace distance:", round(trace_distance(even.normalized(), odd.normalized()), 6))

# %% [markdown]
# For small labels the two components overlap and the mixture has less
# than one bit of entropy.

# %%
for n in (0.1, 0.5, 1.0, 2.0, 5.0):
    r = np.sqrt(n)
    print(f"|u|^2={n:>4}: S = {von_neumann_entropy(CoherentMixture([r, -r], np.diag([0.5, 0.5])).normalized()):.4f} bits")
