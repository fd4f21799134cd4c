"""Strict JSON scenario configuration.

Unknown keys are rejected and every problem is reported with its key path,
e.g. ``scenario.R: must be > 0``.

Schema (all sections optional unless a command needs them)::

    {
      "sampling":  {"f0": 60, "fs": 2000, "n_samples": 400},
      "scenario":  {"R": 1.0, "L": 0.04, "I": 1.0, "inception_angle": 0.0,
                    "offset_enabled": true, "t0": 0.0, "phase": 0.0},
      "errors":    {"current": WAVE, "voltage": WAVE,
                    "current_noise_std": 0.0, "voltage_noise_std": 0.0, "seed": 0},
      "zone":      {"rectangle": {"R_min": 0, "R_max": 5, "L_min": 0, "L_max": 0.2}}
                   or {"polygon": [[R, L], ...]},
      "estimator": {"kind": "short" | "long" | "averaged", "N": 12, "count": 6},
      "threshold": 4,
      "analysis":  {"freq_max_harmonic": 6, "freq_step_fraction": 0.05,
                    "n_phases": 12, "denominator_tau": null}
    }

    WAVE = {"c0": 0.0, "harmonics": [[order, amplitude, phase], ...],
            "sinusoids": [[amplitude, frequency_hz, phase], ...],
            "exponentials": [[amplitude, tau], ...]}

Exponential error terms start at the scenario's ``t0``. ``n_samples``
defaults to ten fundamental cycles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

from .signals import (
    AnalyticWaveform,
    Constant,
    DecayingExponential,
    FaultScenario,
    FourierSeries,
    Harmonic,
    SamplingConfig,
    Sinusoid,
)
from .trip import PolygonZone, RectangleZone, ZoneCharacteristic


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _mapping(obj, path: str, allowed) -> Dict[str, Any]:
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ConfigError(_join(path, key), "unknown key")
    return obj


def _number(obj, path: str, *, positive=False, nonneg=False) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(path, f"expected a number, got {json.dumps(obj)}")
    x = float(obj)
    if not math.isfinite(x):
        raise ConfigError(path, "must be finite")
    if positive and not x > 0:
        raise ConfigError(path, "must be > 0")
    if nonneg and x < 0:
        raise ConfigError(path, "must be >= 0")
    return x


def _integer(obj, path: str, minimum: int = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(path, f"expected an integer, got {json.dumps(obj)}")
    if minimum is not None and obj < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return obj


def _triples(obj, path: str, width: int):
    if not isinstance(obj, list):
        raise ConfigError(path, "expected a list")
    out = []
    for j, row in enumerate(obj):
        p = _join(path, j)
        if not isinstance(row, list) or len(row) != width:
            raise ConfigError(p, f"expected a list of {width} numbers")
        out.append(tuple(_number(x, _join(p, m)) for m, x in enumerate(row)))
    return out


@dataclass(frozen=True)
class EstimatorChoice:
    kind: str = "short"
    N: int = 0
    count: int = 1

    @property
    def window_span(self) -> int:
        """Samples past k consumed by one estimate."""
        if self.kind == "long":
            return self.N
        if self.kind == "averaged":
            return self.count + 1
        return 2


@dataclass(frozen=True)
class AnalysisOptions:
    freq_max_harmonic: float = 6.0
    freq_step_fraction: float = 0.05
    n_phases: int = 12
    denominator_tau: Optional[float] = None


@dataclass(frozen=True)
class ErrorOptions:
    current: Optional[AnalyticWaveform] = None
    voltage: Optional[AnalyticWaveform] = None
    current_noise_std: float = 0.0
    voltage_noise_std: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    sampling: SamplingConfig
    scenario: Optional[FaultScenario] = None
    errors: ErrorOptions = field(default_factory=ErrorOptions)
    zone: Optional[ZoneCharacteristic] = None
    estimator: EstimatorChoice = field(default_factory=EstimatorChoice)
    threshold: int = 4
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(name, "required for this command")


def _parse_sampling(obj, path="sampling") -> SamplingConfig:
    d = _mapping(obj, path, {"f0", "fs", "n_samples"})
    f0 = _number(d.get("f0", 60.0), _join(path, "f0"), positive=True)
    fs = _number(d.get("fs", 2000.0), _join(path, "fs"), positive=True)
    if fs / f0 < 3:
        raise ConfigError(_join(path, "fs"), "need at least 3 samples per cycle (fs/f0 >= 3)")
    if "n_samples" in d:
        n = _integer(d["n_samples"], _join(path, "n_samples"), minimum=3)
    else:
        n = int(math.ceil(10 * fs / f0))
    return SamplingConfig(f0, fs, n)


def _parse_scenario(obj, path="scenario") -> FaultScenario:
    keys = {"R", "L", "I", "inception_angle", "offset_enabled", "t0", "phase"}
    d = _mapping(obj, path, keys)
    for req in ("R", "L"):
        if req not in d:
            raise ConfigError(_join(path, req), "missing required key")
    offset = d.get("offset_enabled", True)
    if not isinstance(offset, bool):
        raise ConfigError(_join(path, "offset_enabled"), "expected true or false")
    return FaultScenario(
        R=_number(d["R"], _join(path, "R"), positive=True),
        L=_number(d["L"], _join(path, "L"), positive=True),
        I=_number(d.get("I", 1.0), _join(path, "I")),
        inception_angle=_number(d.get("inception_angle", 0.0), _join(path, "inception_angle")),
        offset_enabled=offset,
        t0=_number(d.get("t0", 0.0), _join(path, "t0")),
        phase=_number(d.get("phase", 0.0), _join(path, "phase")),
    )


def _parse_wave(obj, path: str, f0: float, t0: float) -> AnalyticWaveform:
    d = _mapping(obj, path, {"c0", "harmonics", "sinusoids", "exponentials"})
    comps = []
    c0 = _number(d.get("c0", 0.0), _join(path, "c0"))
    if c0:
        comps.append(Constant(c0))
    harmonics = _triples(d.get("harmonics", []), _join(path, "harmonics"), 3)
    try:
        series = FourierSeries(0.0, tuple(Harmonic(m, C, th) for m, C, th in harmonics))
    except ValueError as exc:
        raise ConfigError(_join(path, "harmonics"), str(exc)) from None
    comps.extend(series.to_waveform(f0).components)
    for j, (a, f, ph) in enumerate(_triples(d.get("sinusoids", []), _join(path, "sinusoids"), 3)):
        if f < 0:
            raise ConfigError(_join(_join(path, "sinusoids"), j), "frequency must be >= 0")
        comps.append(Sinusoid(a, f, ph))
    for j, (a, tau) in enumerate(_triples(d.get("exponentials", []), _join(path, "exponentials"), 2)):
        if not tau > 0:
            raise ConfigError(_join(_join(path, "exponentials"), j), "time constant must be > 0")
        comps.append(DecayingExponential(a, tau, t0))
    return AnalyticWaveform(tuple(comps))


def _parse_errors(obj, f0: float, t0: float, path="errors") -> ErrorOptions:
    keys = {"current", "voltage", "current_noise_std", "voltage_noise_std", "seed"}
    d = _mapping(obj, path, keys)
    seed = _integer(d.get("seed", 0), _join(path, "seed"), minimum=0)
    return ErrorOptions(
        current=_parse_wave(d["current"], _join(path, "current"), f0, t0) if "current" in d else None,
        voltage=_parse_wave(d["voltage"], _join(path, "voltage"), f0, t0) if "voltage" in d else None,
        current_noise_std=_number(d.get("current_noise_std", 0.0), _join(path, "current_noise_std"), nonneg=True),
        voltage_noise_std=_number(d.get("voltage_noise_std", 0.0), _join(path, "voltage_noise_std"), nonneg=True),
        seed=seed,
    )


def _parse_zone(obj, path="zone") -> ZoneCharacteristic:
    d = _mapping(obj, path, {"rectangle", "polygon"})
    if len(d) != 1:
        raise ConfigError(path, "give exactly one of 'rectangle' or 'polygon'")
    if "rectangle" in d:
        p = _join(path, "rectangle")
        r = _mapping(d["rectangle"], p, {"R_min", "R_max", "L_min", "L_max"})
        vals = {}
        for key in ("R_min", "R_max", "L_min", "L_max"):
            if key not in r:
                raise ConfigError(_join(p, key), "missing required key")
            vals[key] = _number(r[key], _join(p, key))
        try:
            return RectangleZone(**vals)
        except ValueError as exc:
            raise ConfigError(p, str(exc)) from None
    p = _join(path, "polygon")
    verts = _triples(d["polygon"], p, 2)
    try:
        return PolygonZone(tuple(verts))
    except ValueError as exc:
        raise ConfigError(p, str(exc)) from None


def _parse_estimator(obj, path="estimator") -> EstimatorChoice:
    d = _mapping(obj, path, {"kind", "N", "count"})
    kind = d.get("kind", "short")
    if kind not in ("short", "long", "averaged"):
        raise ConfigError(_join(path, "kind"), "must be 'short', 'long' or 'averaged'")
    N = _integer(d.get("N", 2), _join(path, "N"), minimum=2)
    count = _integer(d.get("count", 1), _join(path, "count"), minimum=1)
    return EstimatorChoice(kind, N, count)


def _parse_analysis(obj, path="analysis") -> AnalysisOptions:
    keys = {"freq_max_harmonic", "freq_step_fraction", "n_phases", "denominator_tau"}
    d = _mapping(obj, path, keys)
    tau = d.get("denominator_tau")
    return AnalysisOptions(
        freq_max_harmonic=_number(d.get("freq_max_harmonic", 6.0), _join(path, "freq_max_harmonic"), positive=True),
        freq_step_fraction=_number(d.get("freq_step_fraction", 0.05), _join(path, "freq_step_fraction"), positive=True),
        n_phases=_integer(d.get("n_phases", 12), _join(path, "n_phases"), minimum=1),
        denominator_tau=None if tau is None else _number(tau, _join(path, "denominator_tau"), positive=True),
    )


TOP_KEYS = {"sampling", "scenario", "errors", "zone", "estimator", "threshold", "analysis"}


def parse_config(obj: Any) -> ScenarioConfig:
    d = _mapping(obj, "", TOP_KEYS)
    sampling = _parse_sampling(d.get("sampling", {}))
    scenario = _parse_scenario(d["scenario"]) if "scenario" in d else None
    t0 = scenario.t0 if scenario else 0.0
    return ScenarioConfig(
        sampling=sampling,
        scenario=scenario,
        errors=_parse_errors(d.get("errors", {}), sampling.f0, t0),
        zone=_parse_zone(d["zone"]) if "zone" in d else None,
        estimator=_parse_estimator(d.get("estimator", {})),
        threshold=_integer(d.get("threshold", 4), "threshold", minimum=1),
        analysis=_parse_analysis(d.get("analysis", {})),
    )


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(obj)


def with_seed(cfg: ScenarioConfig, seed: Optional[int]) -> ScenarioConfig:
    if seed is None:
        return cfg
    return replace(cfg, errors=replace(cfg.errors, seed=seed))

