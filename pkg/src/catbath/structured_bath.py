"""Cavity leaking into a Lorentzian-structured continuum.

With ``J(w) = (1/2pi) gamma Lambda^2 / ((w_c - w)^2 + Lambda^2)`` the memory
kernel of the qubit-|1> branch is ``(gamma Lambda / 2) exp(-M tau)`` with
``M = Lambda - i omega``.  The integro-differential equation for the cavity
amplitude then has a closed-form Laplace solution, and so do the bath
amplitudes.  The qubit-|0> branch is the same with ``omega -> -omega``.

A uniformly discretized continuum (:class:`ContinuumGrid`) is used to
evaluate reservoir overlaps and as an independent check through the
finite-bath propagator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import quad_vec

from .model import BranchPropagator, SystemParams

__all__ = [
    "GridResolutionError",
    "LorentzParams",
    "ContinuumGrid",
    "memory_kernel",
    "alpha_structured",
    "beta_structured",
    "alpha_markov",
    "lambda_structured",
    "bath_moments",
    "reservoir_overlap",
    "structured_propagator",
    "markov_propagator",
]

Branch = Literal["plus", "minus"]

MIN_COVERAGE = 0.95
# chunk size (time points x modes) for bath sums
_CHUNK = 2_000_000


class GridResolutionError(ValueError):
    """The continuum grid misses too much of the Lorentzian weight."""


@dataclass(frozen=True)
class LorentzParams:
    """Lorentzian reservoir seen by a cavity with dispersive shift ``omega``.

    ``omega_c`` (the Lorentzian centre) only sets lab-frame phases.
    """

    gamma: float
    lambda_width: float
    omega: float = 1.0
    omega_c: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.lambda_width > 0:
            raise ValueError("lambda_width must be positive")

    @classmethod
    def from_system(cls, params: SystemParams, gamma: float, lambda_width: float) -> LorentzParams:
        return cls(gamma, lambda_width, params.omega, params.omega_c)

    def shift(self, branch: Branch = "plus") -> float:
        return self.omega if branch == "plus" else -self.omega

    def m(self, branch: Branch = "plus") -> complex:
        return complex(self.lambda_width - 1j * self.shift(branch))

    def eta(self, branch: Branch = "plus") -> complex:
        m = self.m(branch)
        return complex(np.sqrt(complex(-2 * self.lambda_width * self.gamma + m * m)))

    def delta(self, branch: Branch = "plus") -> float:
        """Lab-frame cavity frequency of the branch."""
        return self.omega_c + self.shift(branch)

    @property
    def weight(self) -> float:
        """Integral of J over the real line, gamma Lambda / 2."""
        return 0.5 * self.gamma * self.lambda_width

    def spectral_density(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        lam = self.lambda_width
        return self.gamma * lam**2 / (2 * np.pi * ((self.omega_c - w) ** 2 + lam**2))


def memory_kernel(dt, p: LorentzParams, branch: Branch = "plus"):
    """f(dt) = (gamma Lambda / 2) exp(-M dt)."""
    dt = np.asarray(dt, dtype=float)
    if np.any(dt < 0):
        raise ValueError("kernel lag must be non-negative")
    return p.weight * np.exp(-p.m(branch) * dt)


def _cosh_sinh(eta: complex, m: complex, t: np.ndarray) -> np.ndarray:
    """[cosh(eta t/2) + M sinh(eta t/2)/eta] exp(-M t/2), overflow-safe."""
    z = 0.5 * eta * t
    out = np.empty(t.shape, dtype=complex)
    small = np.abs(z) < 0.5
    if np.any(small):
        zs = z[small]
        z2 = zs * zs
        # sinh(z)/z by its series; exact at eta = 0
        shc = 1 + z2 / 6 * (1 + z2 / 20 * (1 + z2 / 42 * (1 + z2 / 72)))
        out[small] = (np.cosh(zs) + m * 0.5 * t[small] * shc) * np.exp(-0.5 * m * t[small])
    big = ~small
    if np.any(big):
        tb = t[big]
        grow = np.exp((0.5 * eta - 0.5 * m) * tb)
        decay = np.exp((-0.5 * eta - 0.5 * m) * tb)
        out[big] = 0.5 * (1 + m / eta) * grow + 0.5 * (1 - m / eta) * decay
    return out


def _cavity(t, a0, p: LorentzParams, branch: Branch, rotating: bool):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    tt = np.atleast_1d(t)
    out = a0 * _cosh_sinh(p.eta(branch), p.m(branch), tt)
    if not rotating:
        out = out * np.exp(-1j * p.delta(branch) * tt)
    return out.reshape(t.shape) if t.ndim else complex(out[0])


def alpha_structured(t, alpha0, p: LorentzParams, rotating: bool = False):
    """Cavity label of the qubit-|1> branch (lab frame unless ``rotating``)."""
    return _cavity(t, alpha0, p, "plus", rotating)


def beta_structured(t, beta0, p: LorentzParams, rotating: bool = False):
    """Cavity label of the qubit-|0> branch (lab frame unless ``rotating``)."""
    return _cavity(t, beta0, p, "minus", rotating)


def alpha_markov(t, alpha0, kappa: float):
    """Markovian cavity decay alpha0 exp(-kappa t) in the rotating frame."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    return alpha0 * np.exp(-kappa * t)


def _lambda_closed(t, x, eta, m):
    """Bracketed closed form divided by its denominator (unit gamma_k, alpha0)."""
    ex = np.exp(x * t)
    num = (
        2 * eta * ex * (m - 2 * x) * np.cosh(0.5 * eta * t)
        - 4 * (m * x - 0.5 * eta**2) * ex * np.sinh(0.5 * eta * t)
        - 2 * eta * (m - 2 * x)
    )
    return 1j * num / (-(eta**3) + 4 * eta * x**2)


def _lambda_quadrature(t, detuning, p: LorentzParams, branch: Branch):
    """-i int_0^t alpha~(s) exp(-i detuning s) ds for unit alpha0 and gamma_k."""
    eta, m = p.eta(branch), p.m(branch)
    det = np.asarray(detuning, dtype=float)

    def integrand(s):
        return -1j * _cosh_sinh(eta, m, np.array([s]))[0] * np.exp(-1j * det * s)

    val, _ = quad_vec(integrand, 0.0, float(t), epsabs=1e-13, epsrel=1e-12)
    return val


def lambda_structured(t, omega_k, alpha0, gamma_k, p: LorentzParams, branch: Branch = "plus", rotating=False):
    """Bath labels lambda_k(t) (or chi_k(t) for ``branch='minus'``).

    Broadcasts over ``t`` (leading axis) and ``omega_k``/``gamma_k`` (trailing
    axis): the result has shape ``t.shape + omega_k.shape``.  Lab frame
    multiplies by ``exp(-i omega_k t)``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    wk = np.atleast_1d(np.asarray(omega_k, dtype=float))
    gk = np.broadcast_to(np.asarray(gamma_k, dtype=float), wk.shape)
    eta, m = p.eta(branch), p.m(branch)
    tt = np.atleast_1d(t)[:, None]
    x = -(0.5 * m + 1j * (p.delta(branch) - wk))[None, :]
    denom = np.abs(-(eta**3) + 4 * eta * x**2)
    scale = (abs(m) + np.abs(x)) ** 3
    singular = (denom < 1e-9 * scale)[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = _lambda_closed(tt, x, eta, m)
    if np.any(singular):
        det = (p.delta(branch) - wk)[singular]
        for i, ti in enumerate(tt[:, 0]):
            unit[i, singular] = _lambda_quadrature(ti, det, p, branch) if ti > 0 else 0.0
    out = alpha0 * gk[None, :] * unit
    if not rotating:
        out = out * np.exp(-1j * tt * wk[None, :])
    shape = t.shape + np.shape(omega_k)
    return out.reshape(shape)


@dataclass(frozen=True)
class ContinuumGrid:
    """Uniform discretization of the Lorentzian continuum.

    Modes span ``[center - half_width, center + half_width]`` with
    ``gamma_k^2 = J(omega_k) * spacing``.
    """

    n_modes: int = 4000
    center: float = 0.0
    half_width: float = 50.0

    def __post_init__(self):
        if self.n_modes < 2:
            raise ValueError("a continuum grid needs at least two modes")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    @classmethod
    def default(cls, p: LorentzParams, n_modes: int = 4000) -> ContinuumGrid:
        """50 Lorentzian widths plus room for the dressed lines at +-omega."""
        return cls(n_modes, p.omega_c, 50 * p.lambda_width + 2 * abs(p.omega))

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.center - self.half_width, self.center + self.half_width, self.n_modes)

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / (self.n_modes - 1)

    def couplings(self, p: LorentzParams) -> np.ndarray:
        return np.sqrt(p.spectral_density(self.frequencies) * self.spacing)

    def coverage(self, p: LorentzParams) -> float:
        """Fraction of the Lorentzian weight captured by sum_k gamma_k^2."""
        return float(np.sum(self.couplings(p) ** 2) / p.weight)

    def check(self, p: LorentzParams):
        cov = self.coverage(p)
        if not MIN_COVERAGE <= cov <= 2 - MIN_COVERAGE:
            raise GridResolutionError(
                f"grid ({self.n_modes} modes, half width {self.half_width:g}) captures {cov:.4f} of the "
                f"Lorentzian weight for Lambda={p.lambda_width:g}; need within {1 - MIN_COVERAGE:.0%} of 1"
            )


def _time_chunks(n_t: int, n_modes: int):
    step = max(1, _CHUNK // max(1, n_modes))
    for start in range(0, n_t, step):
        yield slice(start, min(n_t, start + step))


def bath_moments(times, grid: ContinuumGrid, p: LorentzParams):
    """Gram sums of the unit-amplitude bath labels on ``grid``.

    Returns ``(pp, mm, mp)`` arrays over ``times`` with
    ``pp = sum|l_k|^2``, ``mm = sum|m_k|^2`` and ``mp = sum conj(m_k) l_k``.
    """
    grid.check(p)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    wk, gk = grid.frequencies, grid.couplings(p)
    pp = np.empty(t.size)
    mm = np.empty(t.size)
    mp = np.empty(t.size, dtype=complex)
    for sl in _time_chunks(t.size, wk.size):
        # the common exp(-i w_k t) factor cancels in every sum
        lk = lambda_structured(t[sl], wk, 1.0, gk, p, "plus", rotating=True)
        mk = lambda_structured(t[sl], wk, 1.0, gk, p, "minus", rotating=True)
        pp[sl] = np.sum(np.abs(lk) ** 2, axis=1)
        mm[sl] = np.sum(np.abs(mk) ** 2, axis=1)
        mp[sl] = np.sum(np.conj(mk) * lk, axis=1)
    return pp, mm, mp


def reservoir_overlap(t, grid: ContinuumGrid, p: LorentzParams, alpha0, beta0):
    """<lambda(t)|chi(t)> summed over the grid modes."""
    pp, mm, mp = bath_moments(t, grid, p)
    x = -0.5 * abs(alpha0) ** 2 * pp - 0.5 * abs(beta0) ** 2 * mm + np.conj(alpha0) * beta0 * np.conj(mp)
    out = np.exp(x)
    return complex(out[0]) if np.ndim(t) == 0 else out


def structured_propagator(times, p: LorentzParams, grid: ContinuumGrid | None = None) -> BranchPropagator:
    """Unit-amplitude branch response for the Lorentzian reservoir."""
    grid = grid or ContinuumGrid.default(p)
    t = np.asarray(times, dtype=float)
    pp, mm, mp = bath_moments(t, grid, p)
    return BranchPropagator(
        times=t,
        plus=alpha_structured(t, 1.0, p),
        minus=beta_structured(t, 1.0, p),
        bath_pp=pp,
        bath_mm=mm,
        bath_mp=mp,
    )


def markov_propagator(times, kappa: float, omega: float, omega_c: float = 0.0) -> BranchPropagator:
    """Unit-amplitude branch response of a flat (memoryless) reservoir.

    Both branches decay as ``exp(-kappa t)``; the emitted wave packets of the
    two branches overlap as ``2 kappa int_0^t exp(-(2 kappa + 2 i omega) s) ds``.
    """
    t = np.asarray(times, dtype=float)
    lost = -np.expm1(-2 * kappa * t)
    rate = 2 * kappa + 2j * omega
    cross = 2 * kappa * (-np.expm1(-rate * t)) / rate if abs(rate) > 0 else np.zeros_like(t, dtype=complex)
    return BranchPropagator(
        times=t,
        plus=np.exp(-(kappa + 1j * (omega_c + omega)) * t),
        minus=np.exp(-(kappa + 1j * (omega_c - omega)) * t),
        bath_pp=lost,
        bath_mm=lost.copy(),
        bath_mp=cross,
    )
