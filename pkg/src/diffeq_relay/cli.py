"""Command-line front end: simulate, estimate, freqresp, denominator.

Each command reads a JSON config (see ``diffeq_relay.config``) and writes
CSV with a header row. Exit codes: 0 success, 2 config error, 3 runtime or
numerical error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from typing import List, Sequence, Tuple

import numpy as np

from . import analysis
from . import estimators as est
from .config import ConfigError, ScenarioConfig, load_config, with_seed
from .signals import ErrorModel, SampledSignal, fault_current, sample, white_noise
from .trip import count_to_trip

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12e")


def write_csv(out, header: Sequence[str], rows, comments: Sequence[str] = ()) -> None:
    for line in comments:
        out.write(f"# {line}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")


def measured_signals(cfg: ScenarioConfig) -> Tuple[SampledSignal, SampledSignal, SampledSignal, SampledSignal]:
    """Clean and measured (i, v) for the configured scenario."""
    cfg.require("scenario")
    scn, sc = cfg.scenario, cfg.sampling
    i = fault_current(scn, sc)
    v = sample(scn.voltage_waveform(sc.f0), sc, i.t_start)
    e = cfg.errors
    rng = np.random.default_rng(e.seed)
    noise_i = white_noise(sc, e.current_noise_std, rng)
    noise_v = white_noise(sc, e.voltage_noise_std, rng)
    eps_i = noise_i + ErrorModel(eps_i=e.current).current_error(sc, i.t_start)
    eps_v = noise_v + ErrorModel(eps_v=e.voltage).voltage_error(sc, i.t_start)
    i_m, v_m = ErrorModel(eps_i, eps_v).apply(i, v)
    return i, v, i_m, v_m


def cmd_simulate(cfg: ScenarioConfig, out) -> List[str]:
    i, v, i_m, v_m = measured_signals(cfg)
    rows = zip(i.times, i.values, v.values, i_m.values, v_m.values)
    write_csv(out, ("t", "i", "v", "i_measured", "v_measured"), rows)
    return []


def _estimates(cfg: ScenarioConfig, v: SampledSignal, i: SampledSignal):
    choice = cfg.estimator
    n = len(i)
    if choice.kind == "short":
        return list(est.estimate_series(v, i))
    if choice.kind == "long":
        return [est.long_window_ls(v, i, k, choice.N) for k in range(n - choice.N)]
    return [est.averaged_estimates(v, i, k, choice.count) for k in range(n - choice.count - 1)]


def cmd_estimate(cfg: ScenarioConfig, out) -> List[str]:
    cfg.require("zone")
    _, _, i_m, v_m = measured_signals(cfg)
    estimates = _estimates(cfg, v_m, i_m)
    if not estimates:
        raise ValueError("record too short for the selected estimator")
    run = count_to_trip(estimates, cfg.zone, cfg.threshold, i_m.dt, i_m.t_start, cfg.estimator.window_span)
    rows = []
    for e, inside, count in zip(run.estimates, run.inside, run.counts):
        tripped = run.trip is not None and e.k >= run.trip.window
        rows.append((e.k, i_m.t_start + e.k * i_m.dt, e.R, e.L, e.denominator, e.valid, inside, count, tripped))
    header = ("k", "t", "R", "L", "denominator", "valid", "in_zone", "counter", "trip_flag")
    write_csv(out, header, rows)
    if run.trip is None:
        return ["no trip"]
    t = run.trip
    return [f"TRIP at sample {t.sample_index} (window k={t.window}, t={t.time:.9g} s)"]


def cmd_freqresp(cfg: ScenarioConfig, out) -> List[str]:
    sc, a = cfg.sampling, cfg.analysis
    freqs = analysis.default_freq_grid(sc.f0, a.freq_max_harmonic, a.freq_step_fraction)
    half = analysis.frequency_response("half", sc, freqs, a.n_phases)
    full = analysis.frequency_response("full", sc, freqs, a.n_phases)
    write_csv(out, ("f", "magnitude_halfcycle", "magnitude_fullcycle"), zip(freqs, half.magnitude, full.magnitude))
    return []


def cmd_denominator(cfg: ScenarioConfig, out) -> List[str]:
    cfg.require("scenario")
    scn = cfg.scenario
    trace = analysis.denominator_trace(scn, cfg.sampling, tau=cfg.analysis.denominator_tau)
    if scn.offset_enabled and abs(math.cos(scn.psi)) > 1e-12:
        A, phi = analysis.fit_denominator_oscillation(trace, scn)
    else:
        A, phi = float("nan"), float("nan")
    pA, pphi = analysis.PUBLISHED_DENOMINATOR_FIT
    comments = [
        f"fit_A={fmt(A)},fit_phi_deg={fmt(phi)}",
        f"published_A={pA},published_phi_deg={pphi}",
        f"steady_value={fmt(analysis.steady_denominator(cfg.sampling))}",
    ]
    rows = zip(range(len(trace)), trace.times, trace.values)
    write_csv(out, ("k", "t", "denominator_normalized"), rows, comments)
    return [f"fit A={A:.6g} phi={phi:.6g} deg (published {pA}, {pphi} deg)"]


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "freqresp": cmd_freqresp,
    "denominator": cmd_denominator,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffeq-relay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON scenario file")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
        p.add_argument("--seed", type=int, default=None, help="override errors.seed")
    return parser


def main(argv: Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = with_seed(load_config(args.config), args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    buf = io.StringIO()
    try:
        messages = COMMANDS[args.command](cfg, buf)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, IndexError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        if args.out == "-":
            sys.stdout.write(buf.getvalue())
        else:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_RUNTIME
    for msg in messages:
        print(msg, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
