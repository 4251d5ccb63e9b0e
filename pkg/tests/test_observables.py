import numpy as np
import pytest
from oracles import fock_density, frozen, photon_number, wigner_fock

from catbath.coherent import CoherentMixture, trace_distance, von_neumann_entropy
from catbath.finite_bath import FiniteBathConfig, evolve_branches
from catbath.model import SystemParams, apply_probe_pulse, branch_state
from catbath.observables import (
    BlpResult,
    CatPair,
    NonOrthogonalPairError,
    FragmentSelection,
    ReservoirScenario,
    blp_measure,
    blp_scan,
    cat_pair_family,
    cavity_fragment_state,
    cavity_state,
    check_orthogonal,
    concurrence_series,
    fragment_state,
    idempotency_defect_series,
    mean_photon_number,
    mutual_information,
    nami_curve,
    photon_number_series,
    trace_distance_series,
    wigner,
)
from catbath.structured_bath import LorentzParams, markov_propagator, structured_propagator

PARAMS = SystemParams(omega_c=5.0, omega=0.1, alpha0=np.sqrt(10))


@pytest.fixture(scope="module")
def branches():
    """Post-pulse qubit-|1> branch states of the finite bath at 0, 0.05, 0.25 pi/omega."""
    bath = FiniteBathConfig.default_for(PARAMS)
    t = np.array([0.0, 0.05, 0.25]) * np.pi / PARAMS.omega
    amps = evolve_branches(PARAMS, bath, t)
    return [apply_probe_pulse(branch_state(PARAMS, amps, i))[0] for i in range(len(t))]


def test_cavity_state_initially_pure(branches):
    mix = cavity_state(branches[0])
    assert mix.trace() == pytest.approx(1.0)
    assert von_neumann_entropy(mix) < 1e-12
    assert mean_photon_number(mix) == pytest.approx(10.0)


def test_cavity_state_decoheres(branches):
    s = von_neumann_entropy(cavity_state(branches[2]))
    assert 0.5 < s <= 1.0


def test_fragment_endpoints(branches):
    b = branches[1]
    n = b.n_modes
    empty = FragmentSelection(np.array([], int), n)
    full = FragmentSelection(np.arange(n), n)
    assert von_neumann_entropy(fragment_state(b, empty)) == 0
    # f = 1: fragment entropy equals cavity entropy for a pure global branch
    assert von_neumann_entropy(fragment_state(b, full)) == pytest.approx(von_neumann_entropy(cavity_state(b)), abs=1e-10)
    assert von_neumann_entropy(cavity_fragment_state(b, full)) < 1e-9
    assert von_neumann_entropy(cavity_fragment_state(b, empty)) == pytest.approx(
        von_neumann_entropy(cavity_state(b)), abs=1e-12
    )


def test_schmidt_symmetry_and_subadditivity(branches):
    rng = np.random.default_rng(5)
    b = branches[1]
    for f in (0.1, 0.4, 0.8):
        sel = FragmentSelection.random(b.n_modes, f, rng)
        rest = FragmentSelection(sel.complement(), b.n_modes)
        s_f = von_neumann_entropy(fragment_state(b, sel))
        assert s_f == pytest.approx(von_neumann_entropy(cavity_fragment_state(b, rest)), abs=1e-9)
        s_c = von_neumann_entropy(cavity_state(b))
        assert von_neumann_entropy(cavity_fragment_state(b, sel)) <= s_c + s_f + 1e-12


def test_mutual_information_bounds(branches):
    rng = np.random.default_rng(2)
    for b in branches:
        s_a = von_neumann_entropy(cavity_state(b))
        for f in (0.0, 0.3, 0.7, 1.0):
            i = mutual_information(b, FragmentSelection.random(b.n_modes, f, rng))
            assert -1e-12 <= i <= 2 * s_a + 1e-9
    b = branches[2]
    full = FragmentSelection(np.arange(b.n_modes), b.n_modes)
    assert mutual_information(b, full) == pytest.approx(2 * von_neumann_entropy(cavity_state(b)), abs=1e-9)


def test_fragment_selection_validation():
    with pytest.raises(ValueError):
        FragmentSelection(np.array([0, 0]), 3)
    with pytest.raises(ValueError):
        FragmentSelection(np.array([3]), 3)
    with pytest.raises(ValueError):
        FragmentSelection.random(10, 1.5, np.random.default_rng())
    assert FragmentSelection.random(900, 0.1, np.random.default_rng()).fraction == pytest.approx(0.1)


def test_nami_initial_curve_is_zero(branches):
    curve = nami_curve(branches[0], realizations=5)
    assert np.all(curve.values == 0)


def test_nami_full_fraction_is_one(branches):
    curve = nami_curve(branches[2], [0.5, 1.0], realizations=10)
    assert curve.values[-1] == pytest.approx(1.0, abs=1e-9)
    assert np.all((curve.values >= 0) & (curve.values <= 1 + 1e-9))


def test_nami_fast_path_matches_reduced_states(branches):
    b = branches[1]
    seed, f = 4, 0.3
    curve = nami_curve(b, [f], realizations=1, seed=seed)
    idx = np.random.default_rng([seed, 0]).choice(b.n_modes, size=round(f * b.n_modes), replace=False)
    i = mutual_information(b, FragmentSelection(idx, b.n_modes))
    s_a = von_neumann_entropy(cavity_state(b))
    assert curve.values[0] == pytest.approx(i / (2 * s_a), abs=1e-9)


def test_nami_is_seeded(branches):
    a = nami_curve(branches[1], [0.2, 0.5], realizations=8, seed=3)
    b = nami_curve(branches[1], [0.2, 0.5], realizations=8, seed=3)
    c = nami_curve(branches[1], [0.2, 0.5], realizations=8, seed=4)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_nami_complementarity(branches):
    fr = np.array([0.1, 0.2, 0.3, 0.7, 0.8, 0.9])
    curve = nami_curve(branches[1], fr, realizations=400, seed=11)
    assert np.abs(curve.values[:3] + curve.values[::-1][:3] - 1).max() < 0.02


def test_wigner_of_coherent_state():
    u = 1.0 - 2.0j
    w = wigner(CoherentMixture([u], [[1.0]]), (-1, 3, 41), (-4, 0, 41))
    assert w.values.max() == pytest.approx(2 / np.pi)
    assert w.re[np.argmax(w.values.max(axis=0))] == pytest.approx(1.0)
    assert w.im[np.argmax(w.values.max(axis=1))] == pytest.approx(-2.0)
    assert w.integral() == pytest.approx(1.0, abs=1e-3)


def test_wigner_matches_frozen_cat():
    ref = frozen()["wigner_even_cat"]
    u = np.sqrt(10)
    mix = CoherentMixture.pure([u, -u], [1, 1])
    pts = np.array(ref["re"]) + 1j * np.array(ref["im"])
    for z, want in zip(pts, ref["W"]):
        w = wigner(mix, (z.real, z.real + 1, 2), (z.imag, z.imag + 1, 2))
        assert w.values[0, 0] == pytest.approx(want, abs=1e-10)


def test_wigner_sectors_drop_cross_terms():
    u = 2.0
    tagged = CoherentMixture([u, -u], np.full((2, 2), 0.5), sectors=[0, 1])
    plain = CoherentMixture([u, -u], np.diag([0.5, 0.5]))
    a = wigner(tagged, (-4, 4, 21), (-2, 2, 11)).values
    b = wigner(plain, (-4, 4, 21), (-2, 2, 11)).values
    assert np.abs(a - b).max() < 1e-15
    with pytest.raises(ValueError):
        wigner(CoherentMixture(np.ones((1, 2)), [[1.0]]))


def test_wigner_against_fock_on_decohering_cat(branches):
    mix = cavity_state(branches[2])
    w = wigner(mix, (-5, 5, 11), (-5, 5, 11))
    z = w.re[None, :] + 1j * w.im[:, None]
    rho = fock_density(mix.labels[:, 0], mix.coeff)
    assert np.abs(w.values - wigner_fock(rho, z)).max() < 1e-6


def test_mean_photon_number():
    assert mean_photon_number(CoherentMixture([0.0], [[1.0]])) == 0
    rng = np.random.default_rng(9)
    for _ in range(5):
        u = rng.normal(size=2) * 2 + 1j * rng.normal(size=2) * 2
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = np.outer(x, x.conj())
        mix = CoherentMixture(u, c)
        rho = fock_density(u, c)
        assert mean_photon_number(mix) == pytest.approx(photon_number(rho) / np.trace(rho).real, abs=1e-8)


def test_trajectory_series_basics():
    t = np.linspace(0, 10, 51)
    params = SystemParams(omega_c=0.0, omega=0.22)
    markov = ReservoirScenario(params, kappa=0.5)
    gam = idempotency_defect_series(t, markov)
    assert gam[0] == 0
    assert np.all((gam >= -1e-12) & (gam <= 0.5 + 1e-12))
    n = photon_number_series(t, markov)
    assert n[0] == pytest.approx(10.0)
    assert np.all(np.diff(n) < 0)
    c = concurrence_series(t, markov)
    assert c[0] == 0 and np.all((c >= 0) & (c <= 1))
    with pytest.raises(ValueError):
        ReservoirScenario(params)


def test_cat_pairs_are_orthogonal():
    for pair in cat_pair_family([0.5, 10.0]):
        c1, c2 = pair.coefficients()
        a = CoherentMixture.pure(pair.labels, c1)
        b = CoherentMixture.pure(pair.labels, c2)
        assert trace_distance(a, b) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(NonOrthogonalPairError):
        check_orthogonal(CatPair(1.0).labels, np.array([1, 0]), np.array([0, 1]))
    with pytest.raises(ValueError):
        CatPair(0.0)


def test_trace_distance_series_matches_general_algebra():
    t = np.array([0.0, 0.7, 3.0])
    p = LorentzParams(1.0, 0.05, omega=0.22)
    prop = structured_propagator(t, p)
    pair = CatPair(3.0, np.pi / 2)
    d = trace_distance_series(prop, pair)
    assert d[0] == pytest.approx(1.0, abs=1e-10)
    # rebuild the states at one time with the generic mixture algebra
    i = 2
    comps = pair.labels
    labels = np.r_[prop.plus[i] * comps, prop.minus[i] * comps]
    sectors = [1, 1, 0, 0]
    branch = [1, 1, 0, 0]
    states = []
    for c in pair.coefficients():
        w = np.r_[c, c] / np.sqrt(2)
        coeff = np.empty((4, 4), complex)
        for a in range(4):
            for b in range(4):
                env = prop.bath_log_overlap(i, branch[b], np.r_[comps, comps][b], branch[a], np.r_[comps, comps][a])
                coeff[a, b] = w[a] * np.conj(w[b]) * np.exp(env)
        states.append(CoherentMixture(labels, coeff, sectors).normalized())
    assert d[i] == pytest.approx(trace_distance(*states), abs=1e-10)


def test_blp_markov_is_zero_and_monotone():
    t = np.linspace(0, 20, 401)
    prop = markov_propagator(t, 0.5, 0.22)
    for pair in cat_pair_family([2.0, 10.0]):
        d = trace_distance_series(prop, pair)
        assert np.all((d >= 0) & (d <= 1))
        assert np.all(np.diff(d) <= 1e-12)
    assert blp_measure(prop, cat_pair_family([2.0, 10.0]), t)[0] == 0.0
    with pytest.raises(ValueError):
        blp_measure(prop, [], t)


def test_blp_scan_shape():
    t = np.linspace(0, 10, 201)
    res = blp_scan([0.05, 3.0], cat_pair_family([5.0], [0.0]), t, omega=0.22, n_modes=1000)
    assert isinstance(res, BlpResult)
    assert res.measure.shape == (2,)
    assert np.all(res.measure >= 0)
    assert res.measure[1] < res.measure[0]
