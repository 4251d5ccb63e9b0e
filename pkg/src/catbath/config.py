"""Run configuration: a strict YAML schema with field-level error messages.

A config file looks like::

    scenario: structured-traj
    seed: 1
    output_prefix: fig2
    physics: {omega: 0.22, omega_c: 0.0, phi: 0.785398, photons: 10.0}
    structured_bath: {gamma: 1.0, lambdas: [0.01, 3.0], markov: true}
    times: {start: 0.0, stop: 20.0, count: 2001}

Exactly one of ``finite_bath`` / ``structured_bath`` must be present.
Unknown keys anywhere are errors.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import yaml

from .model import SystemParams

__all__ = [
    "SCENARIOS",
    "ConfigError",
    "PhysicsSection",
    "FiniteBathSection",
    "StructuredBathSection",
    "TimeGrid",
    "ScanSection",
    "NamiSection",
    "WignerSection",
    "RunConfig",
    "parse_config",
    "load_config",
    "dump_config",
    "config_hash",
]

SCENARIOS = ("finite-nami", "structured-traj", "concurrence", "blp", "wigner")


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists ``(field path, message)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.errors))


@dataclass(frozen=True)
class PhysicsSection:
    omega: float = 1.0
    omega_c: float = 5.0
    omega_x: float = 0.0
    phi: float = math.pi / 4
    photons: float = 10.0
    alpha_phase: float = 0.0
    outcome: int = 1

    def system(self, photons: Optional[float] = None, phi: Optional[float] = None) -> SystemParams:
        n = self.photons if photons is None else photons
        alpha0 = math.sqrt(n) * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))
        return SystemParams(
            omega_x=self.omega_x,
            omega_c=self.omega_c,
            omega=self.omega,
            phi=self.phi if phi is None else phi,
            alpha0=alpha0,
        )


@dataclass(frozen=True)
class FiniteBathSection:
    """Uniform finite bath; ``gamma_k: null`` means ``omega / 8``."""

    n_modes: int = 900
    omega_min: float = 0.0
    omega_max: float = 10.0
    gamma_k: Optional[float] = None


@dataclass(frozen=True)
class StructuredBathSection:
    """Lorentzian reservoir; ``half_width: null`` picks the default grid."""

    gamma: float = 1.0
    lambdas: tuple = (0.01, 3.0)
    markov: bool = True
    n_modes: int = 4000
    half_width: Optional[float] = None


@dataclass(frozen=True)
class TimeGrid:
    """``count`` evenly spaced times on ``[start, stop]``."""

    start: float = 0.0
    stop: float = 20.0
    count: int = 2001

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ScanSection:
    photons: tuple = (5.0, 10.0, 20.0)
    phis: tuple = ()
    thetas: tuple = (0.0, math.pi / 2, math.pi)


@dataclass(frozen=True)
class NamiSection:
    fraction_step: float = 0.02
    realizations: int = 100


@dataclass(frozen=True)
class WignerSection:
    extent: float = 8.0
    count: int = 161


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one scenario run."""

    scenario: str
    seed: int
    output_prefix: str = "run"
    physics: PhysicsSection = field(default_factory=PhysicsSection)
    finite_bath: Optional[FiniteBathSection] = None
    structured_bath: Optional[StructuredBathSection] = None
    times: Optional[TimeGrid] = None
    snapshots: tuple = ()
    scan: ScanSection = field(default_factory=ScanSection)
    nami: NamiSection = field(default_factory=NamiSection)
    wigner: WignerSection = field(default_factory=WignerSection)

    def with_seed(self, seed: int) -> RunConfig:
        return dataclasses.replace(self, seed=int(seed))


_SECTIONS = {
    "physics": PhysicsSection,
    "finite_bath": FiniteBathSection,
    "structured_bath": StructuredBathSection,
    "times": TimeGrid,
    "scan": ScanSection,
    "nami": NamiSection,
    "wigner": WignerSection,
}


def _coerce(path: str, name: str, kind, value, errors):
    """Convert a YAML scalar/list to the declared field type."""
    kind = str(kind)
    if kind == "tuple":
        if not isinstance(value, (list, tuple)):
            errors.append((path, "expected a list of numbers"))
            return ()
        out = []
        for i, v in enumerate(value):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                errors.append((f"{path}[{i}]", "expected a number"))
            else:
                out.append(float(v))
        return tuple(out)
    if value is None:
        if "Optional" in kind:
            return None
        errors.append((path, "may not be null"))
        return None
    if "bool" in kind:
        if not isinstance(value, bool):
            errors.append((path, "expected true or false"))
        return value
    if "int" in kind:
        if isinstance(value, bool) or not isinstance(value, int):
            errors.append((path, "expected an integer"))
        return value
    if "float" in kind:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.append((path, "expected a number"))
            return value
        return float(value)
    if "str" in kind:
        if not isinstance(value, str):
            errors.append((path, "expected a string"))
        return value
    return value


def _build(cls, data, prefix: str, errors):
    if not isinstance(data, dict):
        errors.append((prefix or "<root>", "expected a mapping"))
        return None
    known = {f.name: f for f in dataclasses.fields(cls)}
    for key in data:
        if key not in known:
            errors.append((f"{prefix}{key}", "unknown key"))
    kwargs = {}
    for name, f in known.items():
        if name not in data:
            continue
        path = f"{prefix}{name}"
        if name in _SECTIONS:
            value = data[name]
            kwargs[name] = None if value is None else _build(_SECTIONS[name], value, path + ".", errors)
        else:
            kwargs[name] = _coerce(path, name, f.type, data[name], errors)
    try:
        return cls(**kwargs)
    except TypeError as exc:
        errors.append((prefix or "<root>", str(exc)))
        return None


def _positive(errors, path, value, strict=True):
    if value is None:
        return
    if (strict and not value > 0) or (not strict and value < 0):
        errors.append((path, "must be positive" if strict else "must be non-negative"))


def _validate(cfg: RunConfig, errors):
    if cfg.scenario not in SCENARIOS:
        errors.append(("scenario", f"must be one of {', '.join(SCENARIOS)}"))
    if cfg.seed is None or cfg.seed < 0:
        errors.append(("seed", "a non-negative integer seed is required"))
    if not cfg.output_prefix or any(c in cfg.output_prefix for c in "/\\"):
        errors.append(("output_prefix", "must be a non-empty file name prefix"))
    ph = cfg.physics
    _positive(errors, "physics.omega", ph.omega)
    if not 0.0 <= ph.phi <= math.pi / 2:
        errors.append(("physics.phi", "must lie in [0, pi/2]"))
    _positive(errors, "physics.photons", ph.photons, strict=False)
    if ph.outcome not in (0, 1):
        errors.append(("physics.outcome", "must be 0 or 1"))

    if (cfg.finite_bath is None) == (cfg.structured_bath is None):
        errors.append(("finite_bath/structured_bath", "exactly one bath family is required"))
    needs = {
        "finite-nami": "finite_bath",
        "structured-traj": "structured_bath",
        "concurrence": "structured_bath",
        "blp": "structured_bath",
    }.get(cfg.scenario)
    if needs and getattr(cfg, needs) is None:
        errors.append((needs, f"scenario {cfg.scenario} needs a {needs} section"))
    if cfg.finite_bath is not None:
        fb = cfg.finite_bath
        if fb.n_modes < 1:
            errors.append(("finite_bath.n_modes", "must be at least 1"))
        if fb.n_modes > 1 and not fb.omega_min < fb.omega_max:
            errors.append(("finite_bath.omega_max", "must exceed omega_min"))
        _positive(errors, "finite_bath.gamma_k", fb.gamma_k, strict=False)
    if cfg.structured_bath is not None:
        sb = cfg.structured_bath
        _positive(errors, "structured_bath.gamma", sb.gamma)
        for i, x in enumerate(sb.lambdas):
            _positive(errors, f"structured_bath.lambdas[{i}]", x)
        if cfg.scenario in ("structured-traj", "concurrence", "blp") and not sb.lambdas:
            errors.append(("structured_bath.lambdas", "at least one Lorentzian width is required"))
        if sb.n_modes < 2:
            errors.append(("structured_bath.n_modes", "must be at least 2"))
        _positive(errors, "structured_bath.half_width", sb.half_width)

    if cfg.scenario in ("structured-traj", "concurrence", "blp"):
        if cfg.times is None:
            errors.append(("times", f"scenario {cfg.scenario} needs a time grid"))
    if cfg.times is not None:
        tg = cfg.times
        if tg.count < 2:
            errors.append(("times.count", "time grid is empty; need at least 2 points"))
        if tg.start != 0:
            errors.append(("times.start", "trajectories start at t = 0"))
        if not tg.stop > tg.start:
            errors.append(("times.stop", "must exceed start"))
    if cfg.scenario in ("finite-nami", "wigner"):
        if not cfg.snapshots:
            errors.append(("snapshots", "time list is empty"))
        if any(t < 0 for t in cfg.snapshots):
            errors.append(("snapshots", "times must be non-negative"))
        if list(cfg.snapshots) != sorted(cfg.snapshots):
            errors.append(("snapshots", "times must be sorted"))
    for i, n in enumerate(cfg.scan.photons):
        _positive(errors, f"scan.photons[{i}]", n)
    for i, p in enumerate(cfg.scan.phis):
        if not 0.0 <= p <= math.pi / 2:
            errors.append((f"scan.phis[{i}]", "must lie in [0, pi/2]"))
    if cfg.scenario == "blp" and not cfg.scan.photons:
        errors.append(("scan.photons", "the BLP pair family needs photon numbers"))
    if cfg.scenario == "blp" and not cfg.scan.thetas:
        errors.append(("scan.thetas", "the BLP pair family needs phases"))
    if not 0 < cfg.nami.fraction_step <= 1:
        errors.append(("nami.fraction_step", "must lie in (0, 1]"))
    if cfg.nami.realizations < 1:
        errors.append(("nami.realizations", "must be positive"))
    _positive(errors, "wigner.extent", cfg.wigner.extent)
    if cfg.wigner.count < 2:
        errors.append(("wigner.count", "must be at least 2"))


def parse_config(data) -> RunConfig:
    """Build and validate a :class:`RunConfig` from a parsed YAML mapping."""
    errors = []
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "config must be a mapping")])
    for req in ("scenario", "seed"):
        if req not in data:
            errors.append((req, "required"))
    if errors:
        raise ConfigError(errors)
    cfg = _build(RunConfig, data, "", errors)
    if cfg is not None and not errors:
        _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError([("<file>", f"not valid YAML: {exc}")]) from exc
    return parse_config(data)


def _plain(cfg: RunConfig) -> dict:
    def conv(x):
        if isinstance(x, tuple):
            return [conv(v) for v in x]
        if isinstance(x, dict):
            return {k: conv(v) for k, v in x.items() if v is not None}
        return x

    return conv(dataclasses.asdict(cfg))


def dump_config(cfg: RunConfig) -> str:
    """Canonical YAML text; ``dump(parse(dump(c))) == dump(c)``."""
    return yaml.safe_dump(_plain(cfg), sort_keys=False, default_flow_style=None)


def config_hash(cfg: RunConfig) -> str:
    """Stable short digest of the config contents."""
    text = json.dumps(_plain(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]
