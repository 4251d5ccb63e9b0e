"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is repeated in the pytest terminal
summary.  Physics settings come from the preset configs in ``configs/``.
"""

import time
from pathlib import Path

import numpy as np
import pytest
from oracles import entropy_bits, fock_density, purity_defect as fock_purity_defect, random_mixture
from oracles import trace_distance as fock_trace_distance
from oracles import wigner_fock
from scipy.signal import find_peaks

from catbath.cli import main
from catbath.coherent import (
    CoherentMixture,
    concurrence,
    encode_two_qubits,
    purity_defect,
    spectrum,
    trace_distance,
    von_neumann_entropy,
)
from catbath.config import load_config
from catbath.finite_bath import FiniteBathConfig, evolve_branches, evolve_finite
from catbath.model import SystemParams
from catbath.observables import (
    ReservoirScenario,
    blp_measure,
    cat_pair_family,
    cavity_state,
    cavity_state_series,
    concurrence_series,
    mean_photon_number,
    nami_curve,
    wigner,
)
from catbath.scenarios import _finite_snapshots, finite_bath_of
from catbath.structured_bath import (
    ContinuumGrid,
    LorentzParams,
    alpha_structured,
    markov_propagator,
    structured_propagator,
)

CONFIGS = Path(__file__).parent.parent / "configs"
FINITE = load_config(CONFIGS / "finite_nami.yaml")
STRUCTURED = load_config(CONFIGS / "structured_traj.yaml")
BLP = load_config(CONFIGS / "blp.yaml")
OMEGA_S = STRUCTURED.physics.omega
GAMMA = 1.0


def test_criterion_01_excitation_conservation(report):
    worst, elapsed = 0.0, 0.0
    for omega in (FINITE.physics.omega, 1.0):
        params = SystemParams(omega_c=FINITE.physics.omega_c, omega=omega, alpha0=np.sqrt(10))
        bath = FiniteBathConfig.default_for(params)
        t = np.linspace(0, np.pi / omega, 50)
        t0 = time.perf_counter()
        amps = evolve_branches(params, bath, t)
        elapsed = max(elapsed, time.perf_counter() - t0)
        for branch in ("plus", "minus"):
            worst = max(worst, np.abs(amps.excitation(branch) - 10).max())
    ok = worst < 1e-9 and elapsed < 30
    report(1, ok, f"max excitation drift {worst:.2e} (tol 1e-9), slowest run {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_02_analytic_vs_discretized_bath(report):
    t = np.linspace(0, 5 / GAMMA, 201)
    params = SystemParams(omega_c=0.0, omega=OMEGA_S, alpha0=np.sqrt(10))
    errors = {}
    for ratio in (0.01, 0.1, 3.0):
        p = LorentzParams(GAMMA, ratio * GAMMA, OMEGA_S)
        grid = ContinuumGrid(4000, 0.0, 50 * p.lambda_width)
        bath = FiniteBathConfig(
            n_modes=grid.n_modes,
            omega_min=grid.frequencies[0],
            omega_max=grid.frequencies[-1],
            coupling_profile=lambda w, p=p, d=grid.spacing: np.sqrt(p.spectral_density(w) * d),
        )
        cav, _ = evolve_finite(params, bath, "plus", t)
        errors[ratio] = np.abs(np.abs(cav) - np.abs(alpha_structured(t, params.alpha0, p))).max()
    ok = max(errors.values()) < 1e-3
    detail = ", ".join(f"Lambda={k:g}: {v:.2e}" for k, v in errors.items())
    report(2, ok, f"max | |alpha| - |alpha_fin| | {detail} (tol 1e-3)")
    assert ok


def test_criterion_03_markov_limit(report):
    p = LorentzParams(GAMMA, 100 * GAMMA, omega=0.0)
    t = np.linspace(0, 3 / GAMMA, 601)
    a0 = np.sqrt(10)
    dev = np.max(np.abs(np.abs(alpha_structured(t, a0, p)) - a0 * np.exp(-GAMMA * t / 2))) / a0
    ok = dev < 0.02
    report(3, ok, f"relative deviation from exp(-gamma t/2): {dev:.2e} (tol 0.02)")
    assert ok


def test_criterion_04_darwinism_plateau(report):
    t0 = time.perf_counter()
    states = dict(_finite_snapshots(FINITE))
    late = max(states)
    fractions = np.round(np.arange(1, 51) * 0.02, 10)
    curve = nami_curve(states[late], fractions, FINITE.nami.realizations, FINITE.seed)
    start = nami_curve(states[0.0], fractions, FINITE.nami.realizations, FINITE.seed)
    elapsed = time.perf_counter() - t0
    dev = curve.plateau_deviation(0.1, 0.9)
    ok = dev <= 0.05 and np.all(start.values == 0) and elapsed < 300
    report(
        4,
        ok,
        f"t={late:g} pi/omega: max |NAMI-0.5| on [0.1,0.9] = {dev:.3f} (tol 0.05); "
        f"t=0 curve all zero: {bool(np.all(start.values == 0))}; {elapsed:.1f}s",
    )
    assert ok


def test_criterion_05_wigner(report):
    states = dict(_finite_snapshots(FINITE))
    cat = cavity_state(states[0.25])
    grid = wigner(cat, (-7, 7, 281), (-7, 7, 281))
    integral = grid.integral()
    coarse = wigner(cat, (-6, 6, 25), (-6, 6, 25))
    z = coarse.re[None, :] + 1j * coarse.im[:, None]
    rho = fock_density(cat.labels[:, 0], cat.coeff)
    oracle_err = np.abs(coarse.values - wigner_fock(rho, z)).max()
    w_min = grid.values.min()
    ok = abs(integral - 1) <= 1e-3 and oracle_err <= 1e-6 and w_min < 0
    report(5, ok, f"integral {integral:.6f}, Fock-oracle max error {oracle_err:.1e}, min W {w_min:.4f} at t=0.25 pi/omega")
    assert ok


def _maxima(y):
    return find_peaks(y)[0]


def test_criterion_06_coupling_phenomenology(report):
    t = np.linspace(0, 20 / GAMMA, 2001)
    params = SystemParams(omega_c=0.0, omega=OMEGA_S, alpha0=np.sqrt(10))
    out = {}
    for ratio in (0.01, 3.0):
        p = LorentzParams(GAMMA, ratio * GAMMA, OMEGA_S)
        mixes = cavity_state_series(t, ReservoirScenario(params, p), structured_propagator(t, p))
        out[ratio] = (np.array([mean_photon_number(m) for m in mixes]), np.array([purity_defect(m) for m in mixes]))
    n_s, g_s = out[0.01]
    n_w, g_w = out[3.0]
    peaks_n, peaks_g = len(_maxima(n_s)), len(_maxima(g_s))
    # transient: up to the largest photon number reached within gamma t <= 1
    first = int(np.argmax(n_w[t <= 1.0]))
    rises = np.diff(n_w[first:]).max()
    ok = peaks_n >= 2 and peaks_g >= 2 and rises <= 1e-12 and g_w[-1] < 0.02
    report(
        6,
        ok,
        f"Lambda=0.01: {peaks_n} maxima of <n>, {peaks_g} of Gamma; Lambda=3: <n> monotone after "
        f"t={t[first]:.2f} (largest rise {rises:.1e}), final Gamma {g_w[-1]:.1e}",
    )
    assert ok


def test_criterion_07_concurrence(report):
    p = LorentzParams(GAMMA, 0.01 * GAMMA, OMEGA_S)
    prop = structured_propagator(np.r_[0.0, 0.5], p)
    c0 = max(
        concurrence_series(None, ReservoirScenario(SystemParams(omega_c=0.0, omega=OMEGA_S, phi=phi), p), prop)[0]
        for phi in np.linspace(0, np.pi / 2, 7)
    )
    early = [
        concurrence_series(None, ReservoirScenario(SystemParams(omega_c=0.0, omega=OMEGA_S, alpha0=np.sqrt(n)), p), prop)[1]
        for n in (5, 10, 20)
    ]
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(200):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        labels = rng.normal(size=4) * 1.5 + 1j * rng.normal(size=4) * 1.5
        tq = encode_two_qubits(a, b, labels[0], labels[1], labels[2:3], labels[3:4])
        m = tq.amplitudes.reshape(2, 2)
        rho_a = m @ m.conj().T
        worst = max(worst, abs(concurrence(tq) - np.sqrt(max(0.0, 2 * (1 - np.real(np.trace(rho_a @ rho_a)))))))
    ok = c0 == 0 and early[0] < early[1] < early[2] and worst < 1e-12
    report(
        7,
        ok,
        f"C(0) max over phi {c0:.1e}; C at gamma t=0.5 for |alpha|^2=5,10,20: "
        + ", ".join(f"{c:.4f}" for c in early)
        + f"; identity error {worst:.1e}",
    )
    assert ok


def test_criterion_08_non_markovianity(report):
    t = BLP.times.values()
    thetas = BLP.scan.thetas
    family = lambda n: cat_pair_family([n], thetas)  # noqa: E731
    markov = markov_propagator(t, GAMMA / 2, OMEGA_S)
    n_markov = max(blp_measure(markov, family(n), t)[0] for n in (5, 10, 20))
    strong = structured_propagator(t, LorentzParams(GAMMA, 0.01 * GAMMA, OMEGA_S))
    weak = structured_propagator(t, LorentzParams(GAMMA, 3 * GAMMA, OMEGA_S))
    by_n = [blp_measure(strong, family(n), t)[0] for n in (5, 10, 20)]
    weak10 = blp_measure(weak, family(10), t)[0]
    ok = n_markov == 0 and weak10 < 0.01 * by_n[1] and by_n[0] > by_n[1] > by_n[2]
    report(
        8,
        ok,
        f"Markov N={n_markov}; N(3 gamma)={weak10:.1e} vs N(0.01 gamma)={by_n[1]:.3f}; "
        "N at 0.01 gamma for |alpha|^2=5,10,20: " + ", ".join(f"{v:.3f}" for v in by_n),
    )
    assert ok


def test_criterion_09_algebra_oracles(report):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for case in range(500):
        rank = int(rng.integers(1, 5))
        n_sectors = 1 if case % 2 else 2
        la, ca, sa = random_mixture(rng, rank, 12.0, n_sectors)
        lb, cb, sb = random_mixture(rng, int(rng.integers(1, 5)), 12.0, n_sectors)
        a, b = CoherentMixture(la, ca, sa), CoherentMixture(lb, cb, sb)
        ra = fock_density(la, ca, sa, cutoff=60, blocks=n_sectors)
        rb = fock_density(lb, cb, sb, cutoff=60, blocks=n_sectors)
        d_err = abs(trace_distance(a, b) - fock_trace_distance(ra, rb))
        ev = np.sort(np.linalg.eigvalsh(ra))[::-1][:rank]
        worst = max(
            worst,
            np.abs(spectrum(a) - ev).max(),
            abs(von_neumann_entropy(a) - entropy_bits(ra)),
            abs(purity_defect(a) - fock_purity_defect(ra)),
            d_err,
        )
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 60
    report(9, ok, f"500 random mixtures: max error {worst:.1e} (tol 1e-8), {elapsed:.1f}s (limit 60s)")
    assert ok


_DETERMINISM = {}


@pytest.mark.parametrize("name", ["finite_nami", "structured_traj"])
def test_criterion_10_determinism(report, tmp_path, name):
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        out.mkdir()
        assert main(["run", "--config", str(CONFIGS / f"{name}.yaml"), "--out", str(out)]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    _DETERMINISM[name] = (ok, len(outputs[0]))
    detail = "; ".join(f"{k}: {n} files {'identical' if same else 'DIFFER'}" for k, (same, n) in _DETERMINISM.items())
    report(10, all(same for same, _ in _DETERMINISM.values()), f"repeated runs -> {detail}")
    assert ok
