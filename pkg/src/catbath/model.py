"""Physical parameters, the two-branch state and the ideal probe pulse.

The qubit-cavity-bath state is always a superposition of two branches,

    w1 |1> |alpha> |lambda>  +  w0 |0> |beta> |chi>,

where every cavity and bath factor is a (multimode) coherent state.  The
dynamics only ever change the coherent labels, so a branch state is fully
described by two weights and four label sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .coherent import log_overlap

__all__ = [
    "SystemParams",
    "BranchAmplitudes",
    "TwoBranchState",
    "initial_state",
    "apply_probe_pulse",
    "branch_state",
    "BranchPropagator",
]


@dataclass(frozen=True)
class SystemParams:
    """Scalar physics parameters of the dispersive qubit-cavity model.

    ``omega`` is the dispersive shift; the cavity rotates at
    ``omega_c + omega`` when the qubit is in ``|1>`` and at ``omega_c - omega``
    otherwise.  ``omega_x`` only contributes a phase to the ``|1>`` branch.
    ``time_unit`` is a documentation tag for the time axis of a run.
    """

    omega_x: float = 0.0
    omega_c: float = 5.0
    omega: float = 1.0
    phi: float = np.pi / 4
    alpha0: complex = np.sqrt(10.0)
    time_unit: str = "pi/omega"

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not 0.0 <= self.phi <= np.pi / 2:
            raise ValueError(f"phi must lie in [0, pi/2], got {self.phi}")
        object.__setattr__(self, "alpha0", complex(self.alpha0))

    @property
    def delta_plus(self) -> float:
        """Cavity frequency in the qubit-|1> branch."""
        return self.omega_c + self.omega

    @property
    def delta_minus(self) -> float:
        """Cavity frequency in the qubit-|0> branch."""
        return self.omega_c - self.omega

    @property
    def photons(self) -> float:
        return abs(self.alpha0) ** 2


@dataclass(frozen=True)
class BranchAmplitudes:
    """Time series of coherent labels for both qubit branches.

    ``alpha``/``beta`` have shape ``(n_times,)``; ``lam``/``chi`` have shape
    ``(n_times, n_modes)``.
    """

    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    lam: np.ndarray
    chi: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def n_modes(self) -> int:
        return self.lam.shape[1]

    def excitation(self, branch: str = "plus") -> np.ndarray:
        """Total excitation |alpha|^2 + sum_k |lambda_k|^2 per time."""
        if branch == "plus":
            return np.abs(self.alpha) ** 2 + np.sum(np.abs(self.lam) ** 2, axis=1)
        return np.abs(self.beta) ** 2 + np.sum(np.abs(self.chi) ** 2, axis=1)


@dataclass(frozen=True)
class TwoBranchState:
    """``weight_1 |alpha, lam> + weight_0 |beta, chi>``.

    Before the probe pulse the branches carry orthogonal qubit states
    (``qubit_tagged=True``); after it, a state describes the cavity and bath
    attached to one qubit outcome and the branches interfere.
    """

    weight_1: complex
    weight_0: complex
    alpha: complex
    beta: complex
    lam: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    chi: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    qubit_tagged: bool = False

    @property
    def n_modes(self) -> int:
        return len(self.lam)

    def branch_overlap(self) -> complex:
        """<alpha, lam | beta, chi>."""
        x = log_overlap(self.alpha, self.beta) + log_overlap(self.lam, self.chi)
        return complex(np.exp(x))

    def norm2(self) -> float:
        """<psi|psi> evaluated with coherent overlaps."""
        w1, w0 = self.weight_1, self.weight_0
        if self.qubit_tagged:
            return float(abs(w1) ** 2 + abs(w0) ** 2)
        cross = np.conj(w1) * w0 * self.branch_overlap()
        return float(abs(w1) ** 2 + abs(w0) ** 2 + 2 * cross.real)


def initial_state(params: SystemParams, n_modes: int) -> TwoBranchState:
    """Qubit ``sin(phi)|1> + cos(phi)|0>``, cavity at ``alpha0``, bath in vacuum."""
    if n_modes < 0:
        raise ValueError("n_modes must be non-negative")
    vac = np.zeros(n_modes, dtype=complex)
    return TwoBranchState(
        weight_1=complex(np.sin(params.phi)),
        weight_0=complex(np.cos(params.phi)),
        alpha=params.alpha0,
        beta=params.alpha0,
        lam=vac,
        chi=vac.copy(),
        qubit_tagged=True,
    )


def branch_state(params: SystemParams, amps: BranchAmplitudes, index: int) -> TwoBranchState:
    """Pre-pulse state at ``amps.times[index]``.

    The exciton energy gives the |1> branch the phase ``exp(-i omega_x t)``.
    """
    t = amps.times[index]
    return TwoBranchState(
        weight_1=complex(np.sin(params.phi) * np.exp(-1j * params.omega_x * t)),
        weight_0=complex(np.cos(params.phi)),
        alpha=complex(amps.alpha[index]),
        beta=complex(amps.beta[index]),
        lam=amps.lam[index],
        chi=amps.chi[index],
        qubit_tagged=True,
    )


def apply_probe_pulse(state: TwoBranchState) -> tuple[TwoBranchState, TwoBranchState]:
    """Instantaneous resonant pi/2 rotation of the qubit.

    Returns the (unnormalized) cavity-bath states attached to the qubit
    outcomes ``|1>`` and ``|0>``, in that order.
    """
    s = 1 / np.sqrt(2)
    w1, w0 = state.weight_1, state.weight_0
    one = replace(state, weight_1=w1 * s, weight_0=-1j * w0 * s, qubit_tagged=False)
    zero = replace(state, weight_1=-1j * w1 * s, weight_0=w0 * s, qubit_tagged=False)
    return one, zero


@dataclass(frozen=True)
class BranchPropagator:
    """Linear response of both branches to a unit initial cavity amplitude.

    A cavity coherent state ``|u>`` evolves to ``|plus[i] u>`` in the
    qubit-|1> branch while the bath picks up ``|u l(t)>``; likewise
    ``minus``/``m(t)`` for the qubit-|0> branch.  Only the bath Gram sums are
    stored: ``bath_pp = sum|l_k|^2``, ``bath_mm = sum|m_k|^2`` and
    ``bath_mp = sum conj(m_k) l_k``.
    """

    times: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    bath_pp: np.ndarray
    bath_mm: np.ndarray
    bath_mp: np.ndarray

    def __len__(self):
        return len(self.times)

    def bath_log_overlap(self, i: int, branch_a: int, u, branch_b: int, v) -> complex:
        """log of <bath(branch_a, u) | bath(branch_b, v)> at time index ``i``.

        Branch codes are 1 (qubit |1>) and 0 (qubit |0>).
        """
        nn = {1: self.bath_pp[i], 0: self.bath_mm[i]}
        if branch_a == branch_b:
            cross = nn[branch_a]
        elif branch_a == 0:
            cross = self.bath_mp[i]
        else:
            cross = np.conj(self.bath_mp[i])
        return -0.5 * abs(u) ** 2 * nn[branch_a] - 0.5 * abs(v) ** 2 * nn[branch_b] + np.conj(u) * v * cross
