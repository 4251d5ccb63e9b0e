# %% [markdown]
# # Lorentzian reservoir: strong and weak coupling
#
# The cavity now couples to a continuum with a Lorentzian spectral
# density of width Lambda.  For Lambda much smaller than gamma the
# excitation bounces between cavity and reservoir; for large Lambda the
# decay is close to exponential with rate gamma/2 in the amplitude.
#
# Run with ``python3 notebooks/02_structured_trajectory.py``.

# %%
import numpy as np
from scipy.signal import find_peaks

from catbath.model import SystemParams
from catbath.observables import ReservoirScenario, idempotency_defect_series, photon_number_series
from catbath.structured_bath import LorentzParams, alpha_structured, markov_propagator, structured_propagator

gamma, omega = 1.0, 0.22
params = SystemParams(omega_c=0.0, omega=omega, alpha0=np.sqrt(10))
t = np.linspace(0, 20, 2001)

# %% [markdown]
# Analytic cavity amplitude against the exponential decay.

# %%
for ratio in (0.01, 0.1, 3.0, 100.0):
    p = LorentzParams(gamma, ratio * gamma, omega=0.0)
    a = np.abs(alpha_structured(t, params.alpha0, p))
    dev = np.max(np.abs(a - abs(params.alpha0) * np.exp(-gamma * t / 2))) / abs(params.alpha0)
    print(f"Lambda/gamma={ratio:>6g}: max relative deviation from exp(-gamma t/2) = {dev:.3f}")

# %% [markdown]
# Photon number and idempotency defect of the cavity after the pulse.

# %%
for ratio in (0.01, 3.0):
    p = LorentzParams(gamma, ratio * gamma, omega)
    sc = ReservoirScenario(params, p)
    prop = structured_propagator(t, p)
    n = photon_number_series(t, sc, prop)
    g = idempotency_defect_series(t, sc, prop)
    print(
        f"Lambda/gamma={ratio:g}: <n> maxima at gamma t = {np.round(t[find_peaks(n)[0]], 2)}, "
        f"Gamma maxima at {np.round(t[find_peaks(g)[0]], 2)}, final Gamma {g[-1]:.2e}"
    )

kappa = gamma / 2
sc = ReservoirScenario(params, kappa=kappa)
g = idempotency_defect_series(t, sc, markov_propagator(t, kappa, omega))
print(f"Markov limit: peak Gamma {g.max():.3f} at gamma t = {t[np.argmax(g)]:.2f}, final {g[-1]:.2e}")
