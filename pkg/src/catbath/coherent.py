"""Finite-rank linear algebra over non-orthogonal coherent states.

A density operator ``rho = sum_ij C_ij |u_i><u_j|`` over ``r`` coherent labels
has the same non-zero spectrum as the Hermitian ``r x r`` matrix
``B^H C B`` where ``G = B B^H`` is the Gram matrix of the labels.  Everything
here (entropies, purity, trace distances) is computed that way, without ever
truncating a Fock space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GRAM_FLOOR",
    "SpectrumError",
    "log_overlap",
    "coherent_overlap",
    "gram_matrix",
    "CoherentMixture",
    "spectrum",
    "von_neumann_entropy",
    "purity_defect",
    "trace_distance",
    "TwoQubitState",
    "encode_two_qubits",
    "encode_from_overlaps",
    "concurrence",
]

GRAM_FLOOR = 1e-12
NEGATIVE_TOL = 1e-10


class SpectrumError(ValueError):
    """Raised when a mixture is not a valid (Hermitian, PSD) density operator."""


def log_overlap(u, v) -> complex:
    """log <u|v> for (multimode) coherent labels."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"mode count mismatch: {u.shape} vs {v.shape}")
    x = -0.5 * (np.abs(u) ** 2 + np.abs(v) ** 2) + np.conj(u) * v
    return complex(np.sum(x))


def coherent_overlap(u, v) -> complex:
    """<u|v> = exp(sum_k [-(|u_k|^2 + |v_k|^2)/2 + u_k^* v_k])."""
    return complex(np.exp(log_overlap(u, v)))


def gram_matrix(labels, sectors=None) -> np.ndarray:
    """G_ij = <u_i|u_j>; labels in different ``sectors`` are orthogonal.

    ``labels`` has shape ``(r,)`` for single-mode or ``(r, m)`` for multimode
    coherent states.
    """
    u = np.asarray(labels, dtype=complex)
    if u.ndim == 1:
        u = u[:, None]
    sq = np.sum(np.abs(u) ** 2, axis=1)
    x = -0.5 * (sq[:, None] + sq[None, :]) + np.conj(u) @ u.T
    g = np.exp(x)
    if sectors is not None:
        s = np.asarray(sectors)
        g = np.where(s[:, None] == s[None, :], g, 0.0)
    return g


def _gram_factor(g: np.ndarray) -> np.ndarray:
    """B with G ~= B B^H, dropping directions below ``GRAM_FLOOR``."""
    e, v = np.linalg.eigh(g)
    if e.min() < -NEGATIVE_TOL * max(1.0, e.max()):
        raise SpectrumError(f"Gram matrix not positive semidefinite (min eigenvalue {e.min():.3e})")
    keep = e > GRAM_FLOOR
    return v[:, keep] * np.sqrt(e[keep])


class CoherentMixture:
    """``rho = sum_ij coeff[i, j] |u_i><u_j|`` over coherent labels ``u_i``.

    The Gram matrix is computed once at construction.  Optional integer
    ``sectors`` tag labels that live in orthogonal subspaces, e.g. the qubit
    state attached to each cavity label.
    """

    def __init__(self, labels, coeff, sectors=None):
        u = np.asarray(labels, dtype=complex)
        if u.ndim == 1:
            u = u[:, None]
        c = np.asarray(coeff, dtype=complex)
        if c.shape != (len(u), len(u)):
            raise ValueError(f"coefficient matrix {c.shape} does not match {len(u)} labels")
        self.labels = u
        self.coeff = c
        self.sectors = None if sectors is None else np.asarray(sectors, dtype=int)
        self.gram = gram_matrix(u, self.sectors)

    def __repr__(self):
        return f"CoherentMixture(rank={self.rank}, modes={self.n_modes})"

    @classmethod
    def pure(cls, labels, amplitudes, sectors=None) -> CoherentMixture:
        """|psi><psi| for ``|psi> = sum_i amplitudes[i] |u_i>``, normalized."""
        a = np.asarray(amplitudes, dtype=complex)
        return cls(labels, np.outer(a, a.conj()), sectors).normalized()

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def n_modes(self) -> int:
        return self.labels.shape[1]

    def trace(self) -> float:
        return float(np.real(np.sum(self.coeff * self.gram.T)))

    def normalized(self) -> CoherentMixture:
        tr = self.trace()
        if not tr > 0:
            raise SpectrumError(f"mixture has non-positive trace {tr}")
        out = object.__new__(CoherentMixture)
        out.labels, out.sectors, out.gram = self.labels, self.sectors, self.gram
        out.coeff = self.coeff / tr
        return out

    def reduced_matrix(self) -> np.ndarray:
        """Hermitian matrix B^H C B sharing the non-zero spectrum of rho."""
        b = _gram_factor(self.gram)
        m = b.conj().T @ self.coeff @ b
        return 0.5 * (m + m.conj().T)

    def photon_number(self) -> float:
        """Tr[rho a^dag a] for a single-mode mixture (not renormalized)."""
        if self.n_modes != 1:
            raise ValueError("photon number needs a single-mode mixture")
        u = self.labels[:, 0]
        return float(np.real(np.sum(self.coeff * np.outer(u, u.conj()) * self.gram.T)))


def _check_hermitian(c: np.ndarray):
    scale = max(1.0, np.abs(c).max())
    if np.abs(c - c.conj().T).max() > 1e-10 * scale:
        raise SpectrumError("coefficient matrix is not Hermitian")


def spectrum(mix: CoherentMixture) -> np.ndarray:
    """Eigenvalues of rho, descending, padded with zeros to the label count."""
    _check_hermitian(mix.coeff)
    e = np.linalg.eigvalsh(mix.reduced_matrix())[::-1]
    if e.size and e.min() < -NEGATIVE_TOL:
        raise SpectrumError(f"density operator has negative eigenvalue {e.min():.3e}")
    e = np.clip(e, 0.0, None)
    return np.concatenate([e, np.zeros(mix.rank - e.size)])


def von_neumann_entropy(mix: CoherentMixture) -> float:
    """S(rho) in bits; 0 log 0 = 0."""
    p = spectrum(mix)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def purity_defect(mix: CoherentMixture) -> float:
    """Idempotency defect 1 - Tr rho^2."""
    p = spectrum(mix)
    return float(1.0 - np.sum(p**2))


def _union(a: CoherentMixture, b: CoherentMixture):
    """Shared label list with both coefficient matrices embedded in it."""
    if a.n_modes != b.n_modes:
        raise ValueError("mixtures act on different numbers of modes")
    sa = np.zeros(a.rank, int) if a.sectors is None else a.sectors
    sb = np.zeros(b.rank, int) if b.sectors is None else b.sectors
    labels = list(a.labels)
    sectors = list(sa)
    index_b = []
    for u, s in zip(b.labels, sb):
        for j, (v, t) in enumerate(zip(labels, sectors)):
            if s == t and np.array_equal(u, v):
                index_b.append(j)
                break
        else:
            labels.append(u)
            sectors.append(s)
            index_b.append(len(labels) - 1)
    r = len(labels)
    ca = np.zeros((r, r), complex)
    ca[: a.rank, : a.rank] = a.coeff
    cb = np.zeros((r, r), complex)
    ib = np.asarray(index_b)
    np.add.at(cb, (ib[:, None], ib[None, :]), b.coeff)
    use_sectors = a.sectors is not None or b.sectors is not None
    return np.array(labels), ca, cb, (np.array(sectors) if use_sectors else None)


def trace_distance(a: CoherentMixture, b: CoherentMixture) -> float:
    """D = (1/2) tr|rho_a - rho_b| for two (normalized) mixtures."""
    labels, ca, cb, sectors = _union(a, b)
    diff = CoherentMixture(labels, ca - cb, sectors)
    e = np.linalg.eigvalsh(diff.reduced_matrix())
    return float(min(1.0, 0.5 * np.sum(np.abs(e))))


@dataclass(frozen=True)
class TwoQubitState:
    """Pure state ``p+|11> + q+|10> + q-|01> + p-|00>`` of two bosonic qubits.

    ``s_plus``..``phi_b`` record the encoding of the coherent-state pairs;
    ``norm`` is the norm of the branch state before normalization.
    """

    p_plus: complex
    q_plus: complex
    q_minus: complex
    p_minus: complex
    s_plus: float
    s_minus: float
    r_plus: float
    r_minus: float
    theta: float
    phi_b: float
    norm: float

    @property
    def amplitudes(self) -> np.ndarray:
        """Amplitudes ordered as |11>, |10>, |01>, |00>."""
        return np.array([self.p_plus, self.q_plus, self.q_minus, self.p_minus])


def _pair_encoding(x: complex):
    """Magnitudes (S+, S-) and phase theta of a label pair with log-overlap ``x``."""
    mod = np.exp(x.real)
    # 1 - |<u|v>| without cancellation
    one_minus = -np.expm1(x.real)
    plus = np.sqrt((1 + mod) / 2)
    minus = np.sqrt(one_minus / 2)
    # e^{i theta} = <v|u>/|<u|v>| = exp(-i Im x); undefined at exact orthogonality
    theta = 0.0 if mod == 0.0 else float(-x.imag)
    return plus, minus, theta


def encode_two_qubits(a, b, alpha, beta, lam, chi) -> TwoQubitState:
    """Encode ``a|alpha, lam> + b|beta, chi>`` in a two-qubit basis.

    Subsystem A carries ``alpha``/``beta``, subsystem B carries
    ``lam``/``chi``; both may be multimode.  The returned amplitudes are
    normalized.
    """
    return encode_from_overlaps(a, b, log_overlap(alpha, beta), log_overlap(lam, chi))


def encode_from_overlaps(a, b, log_ov_a: complex, log_ov_b: complex) -> TwoQubitState:
    """Two-qubit encoding from the log-overlaps ``log<alpha|beta>`` and ``log<lam|chi>``.

    The encoding only depends on the labels through these two overlaps,
    which lets callers skip materializing large reservoir labels.
    """
    s_p, s_m, theta = _pair_encoding(complex(log_ov_a))
    r_p, r_m, phi_b = _pair_encoding(complex(log_ov_b))
    e = b * np.exp(-1j * (theta + phi_b))
    amps = np.array([(a + e) * s_p * r_p, (-a + e) * s_p * r_m, (-a + e) * s_m * r_p, (a + e) * s_m * r_m])
    norm = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
    if not norm > 0:
        raise ValueError("branch superposition has zero norm")
    amps = amps / norm
    return TwoQubitState(*amps, s_p, s_m, r_p, r_m, theta, phi_b, norm)


def concurrence(tq: TwoQubitState) -> float:
    """Pure-state concurrence 2|p+ p- - q+ q-|."""
    return float(min(1.0, 2 * abs(tq.p_plus * tq.p_minus - tq.q_plus * tq.q_minus)))
