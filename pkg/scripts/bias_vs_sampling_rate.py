"""Three-sample accuracy against sampling rate, with and without DC offset.

For an offset-free sinusoid R is exact and L picks up the trapezoid factor
x/tan(x), x = pi f0 / fs. With maximum offset the worst window error is
reported twice: over every window, and over windows with |D| >= D_ss/2.

    python3 scripts/bias_vs_sampling_rate.py --fs 720 1000 2000 4000 8000
"""

import argparse

import numpy as np

from diffeq_relay.analysis import steady_denominator
from diffeq_relay.estimators import estimate_series, trapezoid_inductance_factor
from diffeq_relay.signals import FaultScenario, SamplingConfig, fault_current, sample


def worst_errors(scn, cfg):
    i = fault_current(scn, cfg)
    v = sample(scn.voltage_waveform(cfg.f0), cfg, i.t_start)
    s = estimate_series(v, i)
    err = np.maximum(np.abs(s.R / scn.R - 1), np.abs(s.L / scn.L - 1))
    keep = s.valid & (np.abs(s.denominators) >= 0.5 * steady_denominator(cfg) * scn.I**2)
    return err[s.valid].max(), err[keep].max()


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--fs", type=float, nargs="+", default=[720, 1000, 2000, 4000, 8000])
    p.add_argument("--f0", type=float, default=60.0)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--L", type=float, default=0.04)
    p.add_argument("--cycles", type=int, default=6)
    args = p.parse_args(argv)

    print(f"{'fs':>7} {'L factor-1':>11} {'no offset':>10} {'offset all':>11} {'offset |D|ok':>13}")
    for fs in args.fs:
        cfg = SamplingConfig(args.f0, fs, int(round(args.cycles * fs / args.f0)))
        free, _ = worst_errors(FaultScenario(args.R, args.L, 1.0, 0.3, offset_enabled=False), cfg)
        off_all, off_ok = worst_errors(FaultScenario(args.R, args.L, 1.0, 0.0), cfg)
        bias = trapezoid_inductance_factor(args.f0, cfg.dt) - 1
        print(f"{fs:7.0f} {bias:+11.3e} {free:10.3e} {off_all:11.3e} {off_ok:13.3e}")


if __name__ == "__main__":
    main()
