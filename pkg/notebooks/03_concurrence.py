# %% [markdown]
# # Qubit-pair encoding and concurrence
#
# Two coherent superpositions in the cavity and the reservoir each span a
# two-dimensional space, so the joint pure state maps onto two qubits.
# Its concurrence tracks how much the reservoir is entangled with the
# cavity.
#
# Run with ``python3 notebooks/03_concurrence.py``.

# %%
import numpy as np

from catbath.coherent import concurrence, encode_two_qubits
from catbath.model import SystemParams
from catbath.observables import ReservoirScenario, concurrence_series
from catbath.structured_bath import LorentzParams, structured_propagator

# %% [markdown]
# A product state has zero concurrence; orthogonal-looking labels with
# equal weights approach a Bell state.

# %%
print("product:", concurrence(encode_two_qubits(1.0, 0.0, 2.0, -2.0, np.array([0.5]), np.array([-0.5]))))
print("near Bell:", concurrence(encode_two_qubits(1.0, 1.0, 4.0, -4.0, np.array([4.0]), np.array([-4.0]))))

# %% [markdown]
# Concurrence along the strong-coupling trajectory for several photon
# numbers and pulse angles.

# %%
gamma, omega = 1.0, 0.22
p = LorentzParams(gamma, 0.01 * gamma, omega)
t = np.linspace(0, 5, 11)
prop = structured_propagator(t, p)
for n in (5, 10, 20):
    sc = ReservoirScenario(SystemParams(omega_c=0.0, omega=omega, alpha0=np.sqrt(n)), p)
    print(f"|alpha|^2={n:>2}: C = {np.round(concurrence_series(None, sc, prop), 4)}")
for phi in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
    sc = ReservoirScenario(SystemParams(omega_c=0.0, omega=omega, phi=phi), p)
    print(f"phi={phi:.3f}: C = {np.round(concurrence_series(None, sc, prop), 4)}")
