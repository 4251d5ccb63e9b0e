"""Exact propagation of the cavity coupled to a finite oscillator bath.

Each qubit branch obeys ``i dv/dt = G v`` with ``v = (alpha, lambda_1..N)``
and an arrowhead generator ``G``.  One Hermitian eigendecomposition per
branch gives ``v(t)`` at any set of times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np
import scipy.linalg

from .model import BranchAmplitudes, SystemParams

__all__ = [
    "EigenDecompositionError",
    "FiniteBathConfig",
    "assemble_generator",
    "arrowhead",
    "propagate",
    "evolve_finite",
    "evolve_branches",
]

Branch = Literal["plus", "minus"]


class EigenDecompositionError(RuntimeError):
    """Hermitian eigensolver failed on a branch generator."""


@dataclass(frozen=True)
class FiniteBathConfig:
    """A bath of ``n_modes`` oscillators on a uniform frequency grid.

    ``coupling_profile`` optionally maps the mode frequencies to per-mode
    couplings; by default every mode couples with ``gamma_k``.
    """

    n_modes: int = 900
    omega_min: float = 0.0
    omega_max: float = 10.0
    gamma_k: float = 0.125
    seed: int = 1
    realizations: int = 100
    coupling_profile: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        if self.n_modes > 1 and not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be below omega_max")
        if self.gamma_k < 0:
            raise ValueError("gamma_k must be non-negative")

    @classmethod
    def default_for(cls, params: SystemParams, **kw) -> FiniteBathConfig:
        """900 modes on [0, 10] with gamma_k = omega/8."""
        return cls(n_modes=900, omega_min=0.0, omega_max=10.0, gamma_k=params.omega / 8, **kw)

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_modes)

    @property
    def couplings(self) -> np.ndarray:
        if self.coupling_profile is not None:
            return np.asarray(self.coupling_profile(self.frequencies), dtype=float)
        return np.full(self.n_modes, self.gamma_k)


def arrowhead(cavity: float, frequencies, couplings) -> np.ndarray:
    """Generator with ``cavity`` and ``frequencies`` on the diagonal and the
    couplings on the first row and column."""
    w = np.asarray(frequencies, dtype=float)
    g = np.asarray(couplings, dtype=float)
    n = len(w)
    m = np.zeros((n + 1, n + 1))
    m[0, 0] = cavity
    m[np.arange(1, n + 1), np.arange(1, n + 1)] = w
    m[0, 1:] = g
    m[1:, 0] = g
    return m


def assemble_generator(params: SystemParams, bath: FiniteBathConfig, branch: Branch) -> np.ndarray:
    """Arrowhead generator for the qubit-|1> (``plus``) or |0> (``minus``) branch."""
    if branch == "plus":
        cavity = params.delta_plus
    elif branch == "minus":
        cavity = params.delta_minus
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return arrowhead(cavity, bath.frequencies, bath.couplings)


def propagate(generator: np.ndarray, v0, times) -> np.ndarray:
    """``exp(-i G t) v0`` for every ``t`` in ``times``; shape ``(n_times, dim)``.

    Rows at ``t = 0`` are ``v0`` exactly.
    """
    try:
        e, v = scipy.linalg.eigh(generator, driver="evd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        if not np.all(np.isfinite(generator)):
            detail = "generator has non-finite entries"
        else:
            detail = f"condition number {np.linalg.cond(generator):.3e}"
        raise EigenDecompositionError(f"eigendecomposition of {generator.shape} generator failed ({detail})") from exc
    v0 = np.asarray(v0, dtype=complex)
    t = np.asarray(times, dtype=float)
    c = v.conj().T @ v0
    phases = np.exp(-1j * np.outer(t, e))
    out = (phases * c) @ v.T
    out[t == 0] = v0
    return out


def _check_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if np.any(np.diff(t) < 0):
        raise ValueError("times must be sorted")
    if t[0] != 0:
        raise ValueError("times must start at 0")
    return t


def evolve_finite(params: SystemParams, bath: FiniteBathConfig, branch: Branch, times):
    """Cavity label and bath labels of one branch at each time.

    Returns ``(cavity, bath_labels)`` with shapes ``(n_times,)`` and
    ``(n_times, n_modes)``.
    """
    t = _check_times(times)
    g = assemble_generator(params, bath, branch)
    v0 = np.zeros(bath.n_modes + 1, dtype=complex)
    v0[0] = params.alpha0
    v = propagate(g, v0, t)
    return v[:, 0], v[:, 1:]


def evolve_branches(params: SystemParams, bath: FiniteBathConfig, times) -> BranchAmplitudes:
    """Both branches on a common time grid."""
    t = _check_times(times)
    alpha, lam = evolve_finite(params, bath, "plus", t)
    beta, chi = evolve_finite(params, bath, "minus", t)
    return BranchAmplitudes(times=t, alpha=alpha, beta=beta, lam=lam, chi=chi)
