"""Error propagation, frequency response and denominator studies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from . import estimators as est
from .signals import (
    AnalyticLike,
    ErrorModel,
    FaultScenario,
    SampledSignal,
    SamplingConfig,
    Sinusoid,
    as_waveform,
    fault_current,
    sample,
    white_noise,
)

#: coefficients printed for the maximum-offset denominator expansion (amplitude, degrees)
PUBLISHED_DENOMINATOR_FIT = (0.5384, 7.41)


# ---------------------------------------------------------------------------
# Effective error term


@dataclass(frozen=True)
class ErrorTerm:
    """Samples of R*eps_i + L*d(eps_i)/dt - eps_v."""

    signal: SampledSignal

    @property
    def values(self) -> np.ndarray:
        return self.signal.values

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


def effective_error(
    eps_i: Optional[AnalyticLike],
    eps_v,
    R: float,
    L: float,
    config: SamplingConfig,
    t_start: float = 0.0,
) -> ErrorTerm:
    """Net error seen by the line equation when i and v carry measurement errors.

    ``eps_i`` must be closed form (its derivative enters). ``eps_v`` may be
    closed form, a SampledSignal on the same grid, a sample sequence, or None.
    """
    t = config.times(t_start)
    if eps_i is None:
        processed = np.zeros_like(t)
    else:
        w = as_waveform(eps_i, config.f0)
        processed = R * w.value(t) + L * w.derivative(t)
    ev = ErrorModel(eps_v=eps_v).voltage_error(config, t_start)
    return ErrorTerm(SampledSignal(config, processed - ev, t_start))


# ---------------------------------------------------------------------------
# Frequency response of averaged three-sample calculations


@dataclass(frozen=True)
class FrequencyResponse:
    freqs: np.ndarray
    magnitude: np.ndarray
    window: str
    samples_per_cycle: int

    def at(self, f: float) -> float:
        j = int(np.argmin(np.abs(self.freqs - f)))
        if not np.isclose(self.freqs[j], f, rtol=0, atol=1e-9 * max(1.0, abs(f))):
            raise KeyError(f"{f} Hz is not on the grid")
        return float(self.magnitude[j])


def default_freq_grid(f0: float, max_harmonic: float = 6.0, step_fraction: float = 0.05) -> np.ndarray:
    n = int(round(max_harmonic / step_fraction))
    return f0 * step_fraction * np.arange(n + 1)


def _window_count(window: str, spc: int) -> int:
    if window == "full":
        return spc
    if window == "half":
        if spc % 2:
            raise ValueError(f"half-cycle window needs an even number of samples per cycle, got {spc}")
        return spc // 2
    raise ValueError(f"window must be 'half' or 'full', got {window!r}")


def _averaged_impedance(freqs, phases, config: SamplingConfig, count: int, amplitude: float):
    """|R_avg + j w0 L_avg| for unit fundamental current and voltage at each frequency.

    Shape (len(freqs), len(phases)).
    """
    dt = config.dt
    t = np.arange(count + 2) * dt
    i = np.cos(config.omega0 * t)
    v = amplitude * np.cos(2 * np.pi * np.asarray(freqs)[:, None, None] * t + np.asarray(phases)[None, :, None])
    i0, i1, i2 = i[:-2], i[1:-1], i[2:]
    v0, v1, v2 = v[..., :-2], v[..., 1:-1], v[..., 2:]
    # Denominators come from the fundamental current only.
    den = 2.0 * (i1 * i1 - i0 * i2)
    num_R = (v2 + v1) * (i1 - i0) - (v1 + v0) * (i2 - i1)
    num_L = 0.5 * dt * ((i2 + i1) * (v1 + v0) - (i1 + i0) * (v2 + v1))
    R_avg = np.mean(num_R / den, axis=-1)
    L_avg = np.mean(num_L / den, axis=-1)
    return np.abs(R_avg + 1j * config.omega0 * L_avg)


def frequency_response(
    window: str = "full",
    config: SamplingConfig = None,
    freqs: Sequence[float] = None,
    n_phases: int = 12,
    voltage_amplitude: float = 1.0,
) -> FrequencyResponse:
    """Response of the averaged three-sample calculation to voltage frequency.

    The current is held at the fundamental and the voltage is a sinusoid at
    each grid frequency. Numerators are averaged over ``spc/2`` (half) or
    ``spc`` (full) consecutive windows, divided by the fundamental-frequency
    denominators, and turned into ``|R + j w0 L|``. That magnitude is
    averaged over ``n_phases`` equally spaced initial voltage phases and
    normalised by its value at f0.
    """
    if config is None:
        config = SamplingConfig.per_cycle(12)
    spc_f = config.samples_per_cycle
    spc = int(round(spc_f))
    if abs(spc - spc_f) > 1e-9 * spc_f:
        raise ValueError(f"samples per cycle must be an integer, got {spc_f:g}")
    count = _window_count(window, spc)
    if freqs is None:
        freqs = default_freq_grid(config.f0)
    freqs = np.asarray(freqs, dtype=float)
    if np.any(freqs < 0) or not np.all(np.isfinite(freqs)):
        raise ValueError("frequencies must be finite and non-negative")
    phases = 2 * np.pi * np.arange(n_phases) / n_phases
    raw = _averaged_impedance(freqs, phases, config, count, voltage_amplitude).mean(axis=1)
    ref = _averaged_impedance([config.f0], phases, config, count, voltage_amplitude).mean(axis=1)[0]
    mag = raw / ref
    return FrequencyResponse(freqs, mag, window, spc)


# ---------------------------------------------------------------------------
# Denominator trace


def denominator_trace(
    scn: FaultScenario,
    config: SamplingConfig,
    t_start: float = None,
    tau: float = None,
) -> SampledSignal:
    """``2 (i[k+1]^2 - i[k] i[k+2]) / I^2`` for every window of the fault current.

    Sample k of the result sits at the time of current sample k. When ``tau``
    is given it must match the scenario's L/R.
    """
    if tau is not None and not math.isclose(tau, scn.tau, rel_tol=1e-9):
        raise ValueError(f"scenario time constant {scn.tau:g} s does not match requested {tau:g} s")
    if config.n_samples < 3:
        raise ValueError("need at least 3 samples")
    i = fault_current(scn, config, t_start).values
    d = 2.0 * (i[1:-1] ** 2 - i[:-2] * i[2:]) / scn.I**2
    start = scn.t0 if t_start is None else t_start
    return SampledSignal(config.with_samples(len(d)), d, start)


def steady_denominator(config: SamplingConfig) -> float:
    """Offset-free normalised denominator, 2 sin^2(w0 dt)."""
    return 2.0 * math.sin(config.omega0 * config.dt) ** 2


def fit_denominator_oscillation(trace: SampledSignal, scn: FaultScenario) -> Tuple[float, float]:
    """Fit ``trace = D_ss - A cos(w0 t' + phi) cos(psi) exp(-(t_{k+1} - t0)/tau)``.

    ``t'`` is the time of sample k+1 measured so that w0 t' equals the
    sinusoid's phase there (w0 t' = w0 (t_{k+1} - t0) + psi). Returns
    ``(A, phi_degrees)``.
    """
    c = math.cos(scn.psi)
    if not scn.offset_enabled or abs(c) < 1e-12:
        raise ValueError("no offset present; oscillation amplitude is undefined")
    cfg = trace.config
    t_mid = trace.times + cfg.dt
    env = c * np.exp(-(t_mid - scn.t0) / scn.tau)
    y = (trace.values - steady_denominator(cfg)) / env
    ang = cfg.omega0 * (t_mid - scn.t0) + scn.psi
    basis = np.column_stack([np.cos(ang), np.sin(ang)])
    (p, q), *_ = np.linalg.lstsq(basis, y, rcond=None)
    # y = -A cos(ang + phi) = -A cos(phi) cos(ang) + A sin(phi) sin(ang)
    A = math.hypot(p, q)
    phi = math.degrees(math.atan2(q, -p))
    return A, phi


# ---------------------------------------------------------------------------
# Comparative studies


@dataclass(frozen=True)
class AmplificationStudy:
    errors: np.ndarray
    abs_denominator: np.ndarray
    rho: float


def amplification_study(
    scn: FaultScenario,
    config: SamplingConfig,
    noise_std: float,
    seed: int,
    n_windows: int = None,
) -> AmplificationStudy:
    """Rank correlation between per-window estimate error and |denominator|.

    White Gaussian noise of standard deviation ``noise_std`` is added to the
    voltage. The error metric is ``hypot(dR/R, dL/L)``.
    """
    if n_windows is None:
        n_windows = int(math.floor(config.samples_per_cycle))
    cfg = config.with_samples(n_windows + 2)
    i = fault_current(scn, cfg)
    v = sample(scn.voltage_waveform(cfg.f0), cfg, i.t_start)
    rng = np.random.default_rng(seed)
    _, v_m = ErrorModel(eps_v=white_noise(cfg, noise_std, rng)).apply(i, v)
    series = est.estimate_series(v_m, i)
    err = np.hypot(series.R / scn.R - 1.0, series.L / scn.L - 1.0)
    dabs = np.abs(series.denominators)
    ok = series.valid
    rho = stats.spearmanr(err[ok], dabs[ok])[0]
    return AmplificationStudy(err, dabs, float(rho))


@dataclass(frozen=True)
class WindowComparison:
    ls_error: float
    three_sample_rms: float

    @property
    def long_window_better(self) -> bool:
        return self.ls_error < self.three_sample_rms


def harmonic_corruption_trial(
    rng: np.random.Generator,
    config: SamplingConfig,
    harmonic: int = 5,
    ripple: float = 0.10,
) -> WindowComparison:
    """One randomised long-window vs three-sample comparison.

    Random R, L (time constant 10-100 ms) and phases; the voltage carries a
    ``harmonic`` ripple at ``ripple`` times the fundamental voltage amplitude.
    Errors are ``hypot(dR/R, dL/L)``: one least-squares estimate over a full
    cycle of rows against the RMS of the three-sample estimates in the same
    span.
    """
    N = int(round(config.samples_per_cycle))
    R = rng.uniform(0.5, 10.0)
    L = R * rng.uniform(0.01, 0.1)
    phase = rng.uniform(0, 2 * np.pi)
    ripple_phase = rng.uniform(0, 2 * np.pi)
    cfg = config.with_samples(N + 2)
    scn = FaultScenario(R, L, 1.0, inception_angle=phase, offset_enabled=False)
    i = fault_current(scn, cfg)
    v_wave = scn.voltage_waveform(cfg.f0)
    v_amp = v_wave.components[0].amplitude
    ripple_wave = as_waveform(Sinusoid(ripple * v_amp, harmonic * cfg.f0, ripple_phase))
    v = sample(v_wave + ripple_wave, cfg, i.t_start)
    ls = est.long_window_ls(v, i, 0, N)
    series = est.estimate_series(v, i, 0, N)
    ls_err = math.hypot(ls.R / R - 1.0, ls.L / L - 1.0)
    short = np.mean((series.R / R - 1.0) ** 2 + (series.L / L - 1.0) ** 2)
    return WindowComparison(ls_err, float(np.sqrt(short)))
