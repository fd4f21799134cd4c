"""Acceptance criteria, one check per criterion.

Each ``criterion_N`` returns ``(passed, detail)``. The pytest wrappers record
a PASS/FAIL line for the terminal summary and then assert. Running this file
directly prints the same lines without pytest.
"""

import math
import time
from dataclasses import replace

import numpy as np

from diffeq_relay import analysis
from diffeq_relay.estimators import estimate_series, trapezoid_inductance_factor
from diffeq_relay.quadrature import IntervalPair, harmonic_pair_integrals
from diffeq_relay.signals import (
    AnalyticWaveform,
    DecayingExponential,
    FaultScenario,
    FourierSeries,
    Ramp,
    SamplingConfig,
    add_measurement_error,
    analytic_line_voltage,
    fault_current,
    line_voltage,
    sample,
    synth_fourier,
)
from diffeq_relay.trip import RectangleZone, count_to_trip, run_relay

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

SUITE_START = time.perf_counter()
F0 = 60.0


def oracle_pair(scn, cfg):
    i = fault_current(scn, cfg)
    return sample(scn.voltage_waveform(cfg.f0), cfg, i.t_start), i


def random_line(rng):
    R = rng.uniform(0.5, 10.0)
    return R, R * rng.uniform(0.01, 0.1)


def healthy(series, cfg, I):
    """Windows whose |denominator| is at least half its offset-free value."""
    return series.valid & (np.abs(series.denominators) >= 0.5 * analysis.steady_denominator(cfg) * I**2)


# ---------------------------------------------------------------------------


def criterion_1():
    """Oracle recovery at 2 kHz, with and without maximum offset."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    cfg = SamplingConfig(F0, 2000.0, 200)
    worst_free = worst_offset = 0.0
    worst_offset_healthy = 0.0
    n_valid = n_flagged = 0
    for _ in range(100):
        R, L = random_line(rng)
        I = 10 ** rng.uniform(0, 4)
        phase = rng.uniform(0, 2 * np.pi)
        v, i = oracle_pair(FaultScenario(R, L, I, phase, offset_enabled=False), cfg)
        s = estimate_series(v, i)
        ok = s.valid
        worst_free = max(worst_free, np.abs(s.R[ok] / R - 1).max(), np.abs(s.L[ok] / L - 1).max())

        # maximum offset: inception on a current zero, either polarity
        scn = FaultScenario(R, L, I, rng.choice([0.0, np.pi]))
        v, i = oracle_pair(scn, cfg)
        s = estimate_series(v, i)
        ok = s.valid
        n_valid += int(ok.sum())
        n_flagged += int((~ok).sum())
        err = np.maximum(np.abs(s.R / R - 1), np.abs(s.L / L - 1))
        worst_offset = max(worst_offset, err[ok].max())
        worst_offset_healthy = max(worst_offset_healthy, err[healthy(s, cfg, I)].max())
    elapsed = time.perf_counter() - t0
    passed = worst_free <= 1e-3 and worst_offset <= 5e-3 and elapsed < 5.0
    detail = (
        f"offset-free worst rel err {worst_free:.3e} (tol 1e-3); "
        f"max offset worst {worst_offset:.3e} over {n_valid} valid windows, {n_flagged} flagged (tol 5e-3); "
        f"max offset with |D| >= D_ss/2: {worst_offset_healthy:.3e}; "
        f"trapezoid L factor at 60 Hz {trapezoid_inductance_factor(F0, cfg.dt) - 1:+.3e}; {elapsed:.2f} s"
    )
    return passed, detail


def criterion_2():
    """Linear current: exact recovery on exactly representable samples."""
    rng = np.random.default_rng(7)
    # fs = 2048 Hz with integer a, b and dyadic R, L makes every sample exact
    cfg = SamplingConfig(F0, 2048.0, 64)
    worst = 0.0
    for _ in range(200):
        a = float(rng.integers(-4096, 4097))
        b = float(rng.integers(1, 2**16) * rng.choice([-1, 1]))
        R, L = rng.integers(1, 640) / 64, rng.integers(1, 1024) / 4096
        i = sample(Ramp(a, b), cfg)
        v = line_voltage(Ramp(a, b), R, L, cfg)
        s = estimate_series(v, i)
        if not s.valid.all():
            return False, "a linear window was flagged invalid"
        worst = max(worst, np.abs(s.R / R - 1).max(), np.abs(s.L / L - 1).max())

    # same check at 2 kHz with arbitrary reals; sample rounding is amplified here
    cfg2 = SamplingConfig(F0, 2000.0, 40)
    general = 0.0
    for _ in range(200):
        b = rng.choice([-1, 1]) * 10 ** rng.uniform(0, 4)
        a = -b * rng.uniform(0, cfg2.n_samples * cfg2.dt)
        R, L = random_line(rng)
        s = estimate_series(line_voltage(Ramp(a, b), R, L, cfg2), sample(Ramp(a, b), cfg2))
        ok = s.valid
        general = max(general, np.abs(s.R[ok] / R - 1).max(), np.abs(s.L[ok] / L - 1).max())
    passed = worst <= 1e-12
    return passed, f"exact samples worst rel err {worst:.1e} (tol 1e-12); 2 kHz float samples {general:.1e}"


def criterion_3():
    """Denominator identity and the maximum-offset trace."""
    cfg = SamplingConfig.per_cycle(12, F0, 48)
    worst = 0.0
    rng = np.random.default_rng(3)
    for _ in range(20):
        I = 10 ** rng.uniform(-2, 4)
        _, i = oracle_pair(FaultScenario(1.0, 0.04, I, rng.uniform(0, 2 * np.pi), offset_enabled=False), cfg)
        x = i.values
        d = 2 * (x[1:-1] ** 2 - x[:-2] * x[2:])
        worst = max(worst, np.abs(d / (0.5 * I**2) - 1).max())

    scn = FaultScenario(1.0, 0.04, 1.0, 0.0)
    trace = analysis.denominator_trace(scn, SamplingConfig.per_cycle(12, F0, 12 * 15), tau=0.04)
    first_min = trace.values[:12].min()
    late = trace.values[trace.times - scn.t0 >= 0.2]
    late_dev = np.abs(late / 0.5 - 1).max()
    A, phi = analysis.fit_denominator_oscillation(trace, scn)
    passed = worst <= 1e-9 and first_min < 0.25 and late.size > 0 and late_dev <= 0.01
    return passed, (
        f"offset-free rel dev {worst:.1e} (tol 1e-9); first-cycle min {first_min:.4f} (< 0.25); "
        f"after 200 ms max rel dev {late_dev:.2e} (<= 1%); fit A={A:.4f} phi={phi:.2f} deg"
    )


def criterion_4():
    """Analytic cancellation and second-order convergence of sampled mode."""
    cfg = SamplingConfig(F0, 2000.0, 10)
    w0 = cfg.omega0
    rng = np.random.default_rng(4)
    worst = 0.0
    for n in (2, 3, 5):
        for mult in (1, 3, 5, 7):
            m = n * mult
            for _ in range(10):
                C = 10 ** rng.uniform(-3, 3)
                series = FourierSeries(0, [(m, C, rng.uniform(-np.pi, np.pi))])
                pair = IntervalPair(n, rng.uniform(0.05, np.pi), rng.uniform(0, 0.02))
                i1, i2 = harmonic_pair_integrals(series, pair, cfg)
                worst = max(worst, abs(i1 + i2) / (C / (m * w0)))

    # windows land on samples for n = 2, alpha = pi/4 at 64, 128, 256 samples/cycle
    pair = IntervalPair(2, math.pi / 4)
    series = FourierSeries(0.1, [(1, 1.0, 0.3), (2, 0.5, 1.0), (3, 0.2, -0.5), (5, 0.1, 2.0)])
    errs = []
    for fs in (3840.0, 7680.0, 15360.0):
        c = SamplingConfig(F0, fs, int(fs / F0))
        exact = np.array(harmonic_pair_integrals(series, pair, c))
        approx = np.array(harmonic_pair_integrals(synth_fourier(series, c), pair, c))
        errs.append(np.abs(approx - exact).max())
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    passed = worst <= 1e-12 and bool(np.all(np.abs(orders - 2) <= 0.1))
    return passed, (
        f"worst |I1+I2|/(C/(m w0)) {worst:.1e} (tol 1e-12); "
        f"sampled errors {', '.join(f'{e:.2e}' for e in errs)}, orders {', '.join(f'{o:.3f}' for o in orders)}"
    )


def criterion_5():
    """Errors that satisfy the line equation: null error term, discretization-only estimator shift."""
    rng = np.random.default_rng(5)
    scenarios = []
    null_worst = 0.0
    for _ in range(50):
        R, L = random_line(rng)
        I = 10 ** rng.uniform(0, 4)
        eps_i = FourierSeries(
            rng.uniform(-0.05, 0.05) * I,
            [(3, 0.05 * I, rng.uniform(0, 2 * np.pi)), (5, 0.05 * I, rng.uniform(0, 2 * np.pi))],
        ).to_waveform(F0) + AnalyticWaveform((DecayingExponential(rng.uniform(-0.1, 0.1) * I, rng.uniform(0.005, 0.1)),))
        eps_v = analytic_line_voltage(eps_i, R, L, F0)
        cfg = SamplingConfig(F0, 2000.0, 200)
        e = analysis.effective_error(eps_i, eps_v, R, L, cfg)
        null_worst = max(null_worst, e.peak / np.abs(eps_v.value(cfg.times())).max())
        scenarios.append((FaultScenario(R, L, I, rng.uniform(0, 2 * np.pi), offset_enabled=False), eps_i, eps_v))

    devs = []
    for fs in (2000.0, 4000.0, 8000.0, 16000.0):
        cfg = SamplingConfig(F0, fs, int(round(3 * fs / F0)))
        t = cfg.times()
        worst = 0.0
        for scn, eps_i, eps_v in scenarios:
            v, i = oracle_pair(scn, cfg)
            clean = estimate_series(v, i)
            dirty = estimate_series(add_measurement_error(v, eps_v.value(t)), add_measurement_error(i, eps_i.value(t)))
            ok = healthy(clean, cfg, scn.I) & healthy(dirty, cfg, scn.I)
            z = clean.R + 1j * cfg.omega0 * clean.L
            dz = (dirty.R - clean.R) + 1j * cfg.omega0 * (dirty.L - clean.L)
            worst = max(worst, (np.abs(dz) / np.abs(z))[ok].max())
        devs.append(worst)
    orders = np.log2(np.array(devs[:-1]) / np.array(devs[1:]))
    passed = null_worst <= 1e-12 and bool(np.all(orders >= 1.8))
    return passed, (
        f"error term / peak eps_v {null_worst:.1e} (tol 1e-12); worst |dZ|/|Z| at 2/4/8/16 kHz "
        f"{', '.join(f'{d:.2e}' for d in devs)}, orders {', '.join(f'{o:.2f}' for o in orders)} (>= 1.8)"
    )


def criterion_6():
    """Six-sample trip and a two-estimate delay from one outside estimate."""
    cfg = SamplingConfig(F0, 2000.0, 40)
    zone = RectangleZone(0.5, 1.5, 0.03, 0.05)
    v, i = oracle_pair(FaultScenario(1.0, 0.04, 100.0, 0.3, offset_enabled=False), cfg)
    run = run_relay(v, i, zone)
    samples_used = run.trip.sample_index + 1
    est = list(run.estimates)
    est[2] = replace(est[2], R=10.0)
    delayed = count_to_trip(est, zone, dt=cfg.dt)
    delay = delayed.trip.window - run.trip.window
    passed = samples_used == 6 and delay == 2
    return passed, f"trip after {samples_used} samples (want 6); one outside estimate delays by {delay} estimates (want 2)"


def criterion_7():
    """Full-cycle least squares vs three-sample under 10% fifth harmonic."""
    rng = np.random.default_rng(0)
    cfg = SamplingConfig.per_cycle(32, F0)
    trials = [analysis.harmonic_corruption_trial(rng, cfg) for _ in range(1000)]
    wins = sum(t.long_window_better for t in trials)
    ls = np.median([t.ls_error for t in trials])
    short = np.median([t.three_sample_rms for t in trials])
    return wins >= 950, f"{wins}/1000 trials favour least squares (need >= 950); median error {ls:.2e} vs {short:.2e}"


def criterion_9():
    """Error grows as |denominator| shrinks under maximum offset and voltage noise."""
    cfg = SamplingConfig(F0, 2000.0)
    scn = FaultScenario(1.0, 0.04, 1.0, 0.0)
    v_amp = math.hypot(scn.R, cfg.omega0 * scn.L) * scn.I
    study = analysis.amplification_study(scn, cfg, 1e-3 * v_amp, seed=0)
    ensemble = [analysis.amplification_study(scn, cfg, 1e-3 * v_amp, seed=s).rho for s in range(100)]
    rate = np.mean(np.array(ensemble) < -0.5)
    return study.rho < -0.5, (
        f"Spearman rho {study.rho:.3f} over {len(study.errors)} windows, seed 0 (need < -0.5); "
        f"seeds 0-99: mean rho {np.mean(ensemble):.3f}, {rate:.0%} below -0.5"
    )


def criterion_8():
    """Frequency response shape, plus total acceptance runtime."""
    half = analysis.frequency_response("half")
    full = analysis.frequency_response("full")
    unity = half.at(F0) == 1.0 and full.at(F0) == 1.0
    nulls = [full.at(m * F0) for m in (2, 3, 4, 5)]
    lobe = half.at(1.5 * F0) > full.at(1.5 * F0)
    elapsed = time.perf_counter() - SUITE_START
    passed = unity and max(nulls) <= 1e-2 and lobe and elapsed < 60.0
    return passed, (
        f"unity at f0: {unity}; full-cycle max at 2-5 f0 {max(nulls):.1e} (<= 1e-2); "
        f"1.5 f0 half {half.at(1.5 * F0):.3f} vs full {full.at(1.5 * F0):.3f}; suite time {elapsed:.1f} s (< 60)"
    )


# ---------------------------------------------------------------------------
# Run order matters only for criterion 8, which times everything before it.

CRITERIA = [
    (1, "oracle recovery", criterion_1),
    (2, "linear-signal exactness", criterion_2),
    (3, "denominator identity", criterion_3),
    (4, "harmonic cancellation", criterion_4),
    (5, "error-term nulling", criterion_5),
    (6, "trip timing", criterion_6),
    (7, "long-window benefit", criterion_7),
    (9, "error amplification", criterion_9),
    (8, "frequency response and runtime", criterion_8),
]


def check(number, name, fn):
    passed, detail = fn()
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number} ({name}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed, line


def test_criterion_1_oracle_recovery():
    passed, line = check(*CRITERIA[0])
    assert passed, line


def test_criterion_2_linear_exactness():
    passed, line = check(*CRITERIA[1])
    assert passed, line


def test_criterion_3_denominator():
    passed, line = check(*CRITERIA[2])
    assert passed, line


def test_criterion_4_harmonic_cancellation():
    passed, line = check(*CRITERIA[3])
    assert passed, line


def test_criterion_5_error_term_nulling():
    passed, line = check(*CRITERIA[4])
    assert passed, line


def test_criterion_6_trip_timing():
    passed, line = check(*CRITERIA[5])
    assert passed, line


def test_criterion_7_long_window_benefit():
    passed, line = check(*CRITERIA[6])
    assert passed, line


def test_criterion_9_error_amplification():
    passed, line = check(*CRITERIA[7])
    assert passed, line


def test_criterion_8_frequency_response_and_runtime():
    passed, line = check(*CRITERIA[8])
    assert passed, line


if __name__ == "__main__":
    results = [check(*c)[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    raise SystemExit(0 if all(results) else 1)
