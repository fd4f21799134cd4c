"""Test-waveform synthesis for a series R-L line.

Currents are kept in closed form (sums of sinusoids, constants and decaying
exponentials) so that the line voltage ``v = R*i + L*di/dt`` can be evaluated
from exact derivatives. Sampling only happens at the very end, which keeps
every downstream estimator error attributable to the estimator itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Tuple, Union

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SamplingConfig:
    """Uniform sampling setup. ``dt`` is always derived from ``fs``."""

    f0: float = 60.0
    fs: float = 2000.0
    n_samples: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.f0) and self.f0 > 0):
            raise ValueError(f"f0 must be positive and finite, got {self.f0!r}")
        if not (math.isfinite(self.fs) and self.fs > 0):
            raise ValueError(f"fs must be positive and finite, got {self.fs!r}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 0:
            raise ValueError(f"n_samples must be a non-negative integer, got {self.n_samples!r}")
        if self.samples_per_cycle < 3:
            raise ValueError(
                f"need at least 3 samples per cycle, got fs/f0 = {self.samples_per_cycle:g}"
            )

    @classmethod
    def per_cycle(cls, samples_per_cycle: float, f0: float = 60.0, n_samples: int = 0):
        return cls(f0=f0, fs=samples_per_cycle * f0, n_samples=n_samples)

    @property
    def dt(self) -> float:
        return 1.0 / self.fs

    @property
    def omega0(self) -> float:
        return TWO_PI * self.f0

    @property
    def samples_per_cycle(self) -> float:
        return self.fs / self.f0

    def with_samples(self, n_samples: int) -> "SamplingConfig":
        return replace(self, n_samples=n_samples)

    def times(self, t_start: float = 0.0) -> np.ndarray:
        return t_start + np.arange(self.n_samples) * self.dt


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Immutable uniformly sampled series; sample k sits at ``t_start + k*dt``."""

    config: SamplingConfig
    values: np.ndarray
    t_start: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("sample values must be one-dimensional")
        if len(values) != self.config.n_samples:
            raise ValueError(
                f"{len(values)} samples supplied but config declares {self.config.n_samples}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dt(self) -> float:
        return self.config.dt

    @property
    def times(self) -> np.ndarray:
        return self.config.times(self.t_start)

    def same_grid(self, other: "SampledSignal") -> bool:
        return self.config == other.config and self.t_start == other.t_start


# ---------------------------------------------------------------------------
# Analytic building blocks. Each exposes value(t) and derivative(t).


@dataclass(frozen=True)
class Constant:
    level: float

    def value(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.level)

    def derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Ramp:
    """``offset + slope * t``."""

    offset: float
    slope: float

    def value(self, t):
        return self.offset + self.slope * np.asarray(t, dtype=float)

    def derivative(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.slope)


@dataclass(frozen=True)
class Sinusoid:
    """``amplitude * cos(2*pi*frequency*t + phase)``; frequency may be any real >= 0."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    @property
    def omega(self) -> float:
        return TWO_PI * self.frequency

    def value(self, t):
        return self.amplitude * np.cos(self.omega * np.asarray(t, dtype=float) + self.phase)

    def derivative(self, t):
        return -self.amplitude * self.omega * np.sin(self.omega * np.asarray(t, dtype=float) + self.phase)


@dataclass(frozen=True)
class DecayingExponential:
    """``amplitude * exp(-(t - t0)/tau)``."""

    amplitude: float
    tau: float
    t0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"time constant must be positive and finite, got {self.tau!r}")

    def value(self, t):
        return self.amplitude * np.exp(-(np.asarray(t, dtype=float) - self.t0) / self.tau)

    def derivative(self, t):
        return -self.value(t) / self.tau


Component = Union[Constant, Ramp, Sinusoid, DecayingExponential]


@dataclass(frozen=True)
class Harmonic:
    order: int
    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"harmonic order must be an integer >= 1, got {self.order!r}")
        if not self.amplitude >= 0:
            raise ValueError(f"harmonic amplitude must be >= 0, got {self.amplitude!r}")
        object.__setattr__(self, "order", int(self.order))


@dataclass(frozen=True)
class FourierSeries:
    """DC level plus harmonics of the fundamental: c0 + sum C_m cos(m w0 t + theta_m)."""

    c0: float = 0.0
    terms: Tuple[Harmonic, ...] = ()

    def __post_init__(self):
        terms = tuple(h if isinstance(h, Harmonic) else Harmonic(*h) for h in self.terms)
        orders = [h.order for h in terms]
        if len(set(orders)) != len(orders):
            raise ValueError(f"duplicate harmonic orders in {orders}")
        object.__setattr__(self, "terms", terms)

    @property
    def max_order(self) -> int:
        return max((h.order for h in self.terms), default=0)

    def value(self, t, omega0: float):
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.c0)
        for h in self.terms:
            out = out + h.amplitude * np.cos(h.order * omega0 * t + h.phase)
        return out

    def derivative(self, t, omega0: float):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for h in self.terms:
            out = out - h.amplitude * h.order * omega0 * np.sin(h.order * omega0 * t + h.phase)
        return out

    def merge(self, other: "FourierSeries") -> "FourierSeries":
        """Series of the pointwise sum; same-order terms are added as phasors."""
        phasors = {}
        for h in self.terms + other.terms:
            phasors[h.order] = phasors.get(h.order, 0j) + h.amplitude * np.exp(1j * h.phase)
        terms = tuple(
            Harmonic(m, float(abs(p)), float(np.angle(p))) for m, p in sorted(phasors.items())
        )
        return FourierSeries(self.c0 + other.c0, terms)

    def to_waveform(self, f0: float) -> "AnalyticWaveform":
        comps: list = [Constant(self.c0)] if self.c0 else []
        comps += [Sinusoid(h.amplitude, h.order * f0, h.phase) for h in self.terms]
        return AnalyticWaveform(tuple(comps))


@dataclass(frozen=True)
class AnalyticWaveform:
    """Sum of closed-form components with an exact derivative."""

    components: Tuple[Component, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in self.components:
            out = out + c.value(t)
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in self.components:
            out = out + c.derivative(t)
        return out

    def __add__(self, other: "AnalyticWaveform") -> "AnalyticWaveform":
        return AnalyticWaveform(self.components + as_waveform(other).components)

    def scaled(self, factor: float) -> "AnalyticWaveform":
        out = []
        for c in self.components:
            if isinstance(c, Constant):
                out.append(Constant(factor * c.level))
            elif isinstance(c, Ramp):
                out.append(Ramp(factor * c.offset, factor * c.slope))
            else:
                out.append(replace(c, amplitude=factor * c.amplitude))
        return AnalyticWaveform(tuple(out))


AnalyticLike = Union[AnalyticWaveform, FourierSeries, Component]


def as_waveform(obj, f0: float = None) -> AnalyticWaveform:
    """Coerce a closed-form description to ``AnalyticWaveform``.

    Raw samples are refused: the voltage oracle needs an exact derivative.
    """
    if isinstance(obj, AnalyticWaveform):
        return obj
    if isinstance(obj, FourierSeries):
        if f0 is None:
            raise ValueError("a FourierSeries needs the fundamental frequency f0")
        return obj.to_waveform(f0)
    if isinstance(obj, (Constant, Ramp, Sinusoid, DecayingExponential)):
        return AnalyticWaveform((obj,))
    if isinstance(obj, (SampledSignal, np.ndarray, list, tuple)):
        raise TypeError(
            "current must be given in closed form; raw samples have no exact derivative"
        )
    raise TypeError(f"cannot interpret {type(obj).__name__} as an analytic waveform")


def sample(waveform: AnalyticLike, config: SamplingConfig, t_start: float = 0.0) -> SampledSignal:
    w = as_waveform(waveform, config.f0)
    return SampledSignal(config, w.value(config.times(t_start)), t_start)


# ---------------------------------------------------------------------------
# Fault scenarios


@dataclass(frozen=True)
class FaultScenario:
    """Faulted R-L line fed by a sinusoidal source.

    From inception at ``t0`` the current is

        i(t) = I cos(w0 (t - t0) + psi) - I cos(psi) exp(-(t - t0) R / L)

    with ``psi = inception_angle + phase``. Both the sinusoid and the frozen
    offset use the same ``psi``, so the current starts from zero at ``t0``.
    ``inception_angle = 0`` gives the largest possible offset.
    """

    R: float
    L: float
    I: float = 1.0
    inception_angle: float = 0.0
    offset_enabled: bool = True
    t0: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0):
            raise ValueError(f"R must be positive, got {self.R!r}")
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"L must be positive, got {self.L!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"time constant L/R must be positive and finite, got {self.tau!r}")

    @property
    def tau(self) -> float:
        return self.L / self.R

    @property
    def psi(self) -> float:
        return self.inception_angle + self.phase

    def current_waveform(self, f0: float) -> AnalyticWaveform:
        w0 = TWO_PI * f0
        comps: list = [Sinusoid(self.I, f0, self.psi - w0 * self.t0)]
        if self.offset_enabled:
            comps.append(DecayingExponential(-self.I * math.cos(self.psi), self.tau, self.t0))
        return AnalyticWaveform(tuple(comps))

    def voltage_waveform(self, f0: float) -> AnalyticWaveform:
        """Closed-form R*i + L*di/dt; the offset term contributes nothing."""
        return analytic_line_voltage(self.current_waveform(f0), self.R, self.L, f0)


def analytic_line_voltage(current: AnalyticLike, R: float, L: float, f0: float = None) -> AnalyticWaveform:
    """``R*i + L*di/dt`` rebuilt component by component in closed form.

    Sinusoids go through the phasor ``R + j w L``; exponentials scale by
    ``R - L/tau`` (so the homogeneous solution ``tau = L/R`` is dropped); a
    ramp ``a + b t`` maps to ``(R a + L b) + R b t``.
    """
    out = []
    for c in as_waveform(current, f0).components:
        if isinstance(c, Constant):
            out.append(Constant(R * c.level))
        elif isinstance(c, Ramp):
            out.append(Ramp(R * c.offset + L * c.slope, R * c.slope))
        elif isinstance(c, Sinusoid):
            z = complex(R, c.omega * L)
            out.append(Sinusoid(c.amplitude * abs(z), c.frequency, c.phase + math.atan2(z.imag, z.real)))
        elif isinstance(c, DecayingExponential):
            if R and L and math.isclose(c.tau, L / R, rel_tol=1e-12):
                continue
            out.append(DecayingExponential(c.amplitude * (R - L / c.tau), c.tau, c.t0))
    return AnalyticWaveform(tuple(out))


def synth_fourier(series: FourierSeries, config: SamplingConfig, t_start: float = 0.0) -> SampledSignal:
    return SampledSignal(config, series.value(config.times(t_start), config.omega0), t_start)


def fault_current(scn: FaultScenario, config: SamplingConfig, t_start: float = None) -> SampledSignal:
    """Sample the fault current; samples start at inception unless told otherwise."""
    if t_start is None:
        t_start = scn.t0
    if t_start < scn.t0 - 1e-12 * max(1.0, abs(scn.t0)):
        raise ValueError(f"samples start at {t_start} s, before fault inception at {scn.t0} s")
    return sample(scn.current_waveform(config.f0), config, t_start)


def line_voltage(
    current: AnalyticLike, R: float, L: float, config: SamplingConfig, t_start: float = 0.0
) -> SampledSignal:
    """Voltage across the line, ``R*i + L*di/dt``, with an analytic derivative."""
    w = as_waveform(current, config.f0)
    t = config.times(t_start)
    return SampledSignal(config, R * w.value(t) + L * w.derivative(t), t_start)


def add_measurement_error(s: SampledSignal, e) -> SampledSignal:
    """Pointwise ``s + e``. ``e`` may be a SampledSignal or a plain sequence."""
    if isinstance(e, SampledSignal):
        if not s.same_grid(e):
            raise ValueError("error signal is on a different sampling grid")
        e = e.values
    e = np.asarray(e, dtype=float)
    if e.shape != s.values.shape:
        raise ValueError(f"error has {e.size} samples, signal has {len(s)}")
    return SampledSignal(s.config, s.values + e, s.t_start)


ErrorSpec = Union[AnalyticLike, SampledSignal, Sequence[float], None]


@dataclass(frozen=True)
class ErrorModel:
    """Additive measurement errors on current and voltage.

    Each side is either a closed-form description or a sample sequence on the
    host grid. ``None`` means no error.
    """

    eps_i: ErrorSpec = None
    eps_v: ErrorSpec = None

    @staticmethod
    def _sample(spec: ErrorSpec, config: SamplingConfig, t_start: float) -> np.ndarray:
        if spec is None:
            return np.zeros(config.n_samples)
        if isinstance(spec, SampledSignal):
            if spec.config != config or spec.t_start != t_start:
                raise ValueError("error samples are on a different sampling grid")
            return np.asarray(spec.values)
        if isinstance(spec, (np.ndarray, list, tuple)):
            arr = np.asarray(spec, dtype=float)
            if arr.shape != (config.n_samples,):
                raise ValueError(f"error has {arr.size} samples, host has {config.n_samples}")
            return arr
        return as_waveform(spec, config.f0).value(config.times(t_start))

    def current_error(self, config: SamplingConfig, t_start: float = 0.0) -> np.ndarray:
        return self._sample(self.eps_i, config, t_start)

    def voltage_error(self, config: SamplingConfig, t_start: float = 0.0) -> np.ndarray:
        return self._sample(self.eps_v, config, t_start)

    def apply(self, i: SampledSignal, v: SampledSignal) -> Tuple[SampledSignal, SampledSignal]:
        """Return measured (i_m, v_m)."""
        if not i.same_grid(v):
            raise ValueError("current and voltage are on different sampling grids")
        return (
            add_measurement_error(i, self.current_error(i.config, i.t_start)),
            add_measurement_error(v, self.voltage_error(v.config, v.t_start)),
        )


def white_noise(config: SamplingConfig, std: float, rng: np.random.Generator) -> np.ndarray:
    return std * rng.standard_normal(config.n_samples)

