"""Scenario pipelines turning a :class:`RunConfig` into tables."""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .config import RunConfig, config_hash
from .finite_bath import FiniteBathConfig, evolve_branches
from .model import apply_probe_pulse, branch_state
from .observables import (
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
from .coherent import purity_defect, von_neumann_entropy
from .output import ScanResult
from .structured_bath import ContinuumGrid, LorentzParams, markov_propagator, structured_propagator

__all__ = ["run_scenario", "finite_bath_of", "lorentz_of"]


def _label(x: float) -> str:
    return format(x, "g")


def finite_bath_of(cfg: RunConfig) -> FiniteBathConfig:
    fb = cfg.finite_bath
    gamma_k = cfg.physics.omega / 8 if fb.gamma_k is None else fb.gamma_k
    return FiniteBathConfig(
        n_modes=fb.n_modes,
        omega_min=fb.omega_min,
        omega_max=fb.omega_max,
        gamma_k=gamma_k,
        seed=cfg.seed,
        realizations=cfg.nami.realizations,
    )


def lorentz_of(cfg: RunConfig, ratio: float) -> tuple:
    """Lorentzian parameters and grid for ``Lambda = ratio * gamma``."""
    sb = cfg.structured_bath
    p = LorentzParams(sb.gamma, ratio * sb.gamma, cfg.physics.omega)
    if sb.half_width is None:
        grid = ContinuumGrid.default(p, sb.n_modes)
    else:
        grid = ContinuumGrid(sb.n_modes, p.omega_c, sb.half_width)
    return p, grid


class _Tables:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.hash = config_hash(cfg)
        self.out = []

    def add(self, name, columns, rows, layout, units, title=""):
        self.out.append(
            ScanResult(name, tuple(columns), np.asarray(rows), layout, units, self.hash, self.cfg.seed, __version__, title)
        )


def _wigner_rows(mix, cfg: RunConfig, tag: float):
    ext, count = cfg.wigner.extent, cfg.wigner.count
    grid = wigner(mix, (-ext, ext, count), (-ext, ext, count))
    xx, yy = np.meshgrid(grid.re, grid.im)
    rows = np.column_stack([np.full(xx.size, tag), xx.ravel(), yy.ravel(), grid.values.ravel()])
    return rows, grid


def _finite_snapshots(cfg: RunConfig):
    """Post-pulse branch states at the configured snapshot times (units pi/omega)."""
    params = cfg.physics.system()
    bath = finite_bath_of(cfg)
    snaps = np.asarray(cfg.snapshots, dtype=float)
    times = snaps * math.pi / params.omega
    grid = times if times[0] == 0 else np.r_[0.0, times]
    amps = evolve_branches(params, bath, grid)
    offset = len(grid) - len(times)
    for k, s in enumerate(snaps):
        one, zero = apply_probe_pulse(branch_state(params, amps, k + offset))
        yield s, (one if cfg.physics.outcome == 1 else zero)


def _finite_nami(cfg: RunConfig, tables: _Tables):
    step = cfg.nami.fraction_step
    fractions = np.round(np.arange(1, int(round(1 / step)) + 1) * step, 12)
    fractions = fractions[fractions <= 1.0]
    nami_rows, wig_rows, summary = [], [], []
    for s, branch in _finite_snapshots(cfg):
        curve = nami_curve(branch, fractions, cfg.nami.realizations, cfg.seed)
        nami_rows.extend([s, f, v] for f, v in zip(curve.fractions, curve.values))
        mix = cavity_state(branch)
        rows, grid = _wigner_rows(mix, cfg, s)
        wig_rows.append(rows)
        summary.append(
            [
                s,
                curve.cavity_entropy,
                curve.plateau_deviation(),
                mean_photon_number(mix),
                purity_defect(mix),
                grid.values.min(),
                grid.integral(),
            ]
        )
    tables.add("nami", ["t", "f", "nami"], nami_rows, "curves", "t in pi/omega; nami dimensionless", "NAMI vs fragment fraction")
    tables.add("wigner", ["t", "x", "y", "W"], np.vstack(wig_rows), "heatmap", "t in pi/omega", "Wigner function")
    tables.add(
        "summary",
        ["t", "S_A", "plateau_dev", "mean_n", "Gamma", "W_min", "W_integral"],
        summary,
        "series",
        "t in pi/omega; S_A in bits",
    )


def _structured_traj(cfg: RunConfig, tables: _Tables):
    params = cfg.physics.system()
    t = cfg.times.values()
    cols, data = ["t"], [t]
    for ratio in cfg.structured_bath.lambdas:
        p, grid = lorentz_of(cfg, ratio)
        sc = ReservoirScenario(params, p, grid=grid, outcome=cfg.physics.outcome)
        mixes = cavity_state_series(t, sc, structured_propagator(t, p, grid))
        cols += [f"n_lambda={_label(ratio)}", f"Gamma_lambda={_label(ratio)}"]
        data += [[mean_photon_number(m) for m in mixes], [purity_defect(m) for m in mixes]]
    if cfg.structured_bath.markov:
        kappa = cfg.structured_bath.gamma / 2
        sc = ReservoirScenario(params, kappa=kappa, outcome=cfg.physics.outcome)
        mixes = cavity_state_series(t, sc, markov_propagator(t, kappa, params.omega, params.omega_c))
        cols += ["n_markov", "Gamma_markov"]
        data += [[mean_photon_number(m) for m in mixes], [purity_defect(m) for m in mixes]]
    tables.add("trajectory", cols, np.column_stack(data), "series", "t in 1/gamma", "photon number and idempotency defect")


def _concurrence(cfg: RunConfig, tables: _Tables):
    t = cfg.times.values()
    ratio = cfg.structured_bath.lambdas[0]
    p, grid = lorentz_of(cfg, ratio)
    prop = structured_propagator(t, p, grid)
    ph = cfg.physics
    phis = cfg.scan.phis or (ph.phi,)
    cols, data = ["t"], [t]
    for phi in phis:
        sc = ReservoirScenario(ph.system(phi=phi), p, grid=grid, outcome=ph.outcome)
        cols.append(f"C_phi={_label(phi)}")
        data.append(concurrence_series(t, sc, prop))
    tables.add("concurrence_phi", cols, np.column_stack(data), "series", f"t in 1/gamma; Lambda={_label(ratio)} gamma")
    cols, data = ["t"], [t]
    for n in cfg.scan.photons:
        sc = ReservoirScenario(ph.system(photons=n), p, grid=grid, outcome=ph.outcome)
        cols.append(f"C_photons={_label(n)}")
        data.append(concurrence_series(t, sc, prop))
    tables.add("concurrence_photons", cols, np.column_stack(data), "series", f"t in 1/gamma; Lambda={_label(ratio)} gamma")


def _blp(cfg: RunConfig, tables: _Tables):
    t = cfg.times.values()
    ratios = cfg.structured_bath.lambdas
    photons = cfg.scan.photons
    table = np.zeros((len(ratios), len(photons)))
    for i, ratio in enumerate(ratios):
        p, grid = lorentz_of(cfg, ratio)
        prop = structured_propagator(t, p, grid)
        for j, n in enumerate(photons):
            table[i, j] = blp_measure(prop, cat_pair_family([n], cfg.scan.thetas), t)[0]
    cols = ["lambda_over_gamma"] + [f"N_photons={_label(n)}" for n in photons]
    tables.add("blp", cols, np.column_stack([ratios, table]), "series", "Lambda in units of gamma", "BLP measure")


def _wigner_only(cfg: RunConfig, tables: _Tables):
    rows = []
    if cfg.finite_bath is not None:
        for s, branch in _finite_snapshots(cfg):
            rows.append(_wigner_rows(cavity_state(branch), cfg, s)[0])
        units = "t in pi/omega"
    else:
        ratio = cfg.structured_bath.lambdas[0]
        p, grid = lorentz_of(cfg, ratio)
        t = np.asarray(cfg.snapshots, dtype=float)
        sc = ReservoirScenario(cfg.physics.system(), p, grid=grid, outcome=cfg.physics.outcome)
        for s, mix in zip(t, cavity_state_series(t, sc)):
            rows.append(_wigner_rows(mix, cfg, s)[0])
        units = f"t in 1/gamma; Lambda={_label(ratio)} gamma"
    tables.add("wigner", ["t", "x", "y", "W"], np.vstack(rows), "heatmap", units, "Wigner function")


_PIPELINES = {
    "finite-nami": _finite_nami,
    "structured-traj": _structured_traj,
    "concurrence": _concurrence,
    "blp": _blp,
    "wigner": _wigner_only,
}


def run_scenario(cfg: RunConfig) -> list:
    """All :class:`ScanResult` tables of one validated config."""
    tables = _Tables(cfg)
    _PIPELINES[cfg.scenario](cfg, tables)
    return tables.out
