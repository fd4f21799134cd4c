"""Frequency response of averaged three-sample calculations (half and full cycle).

    python3 scripts/frequency_response.py --spc 12 --out freqresp.csv
"""

import argparse
import csv
import sys

from diffeq_relay.analysis import default_freq_grid, frequency_response
from diffeq_relay.signals import SamplingConfig


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--f0", type=float, default=60.0)
    p.add_argument("--spc", type=int, default=12, help="samples per cycle (even)")
    p.add_argument("--max-harmonic", type=float, default=6.0)
    p.add_argument("--step", type=float, default=0.05, help="grid step as a fraction of f0")
    p.add_argument("--phases", type=int, default=12, help="voltage phases averaged")
    p.add_argument("--out", default="-")
    args = p.parse_args(argv)

    cfg = SamplingConfig.per_cycle(args.spc, args.f0)
    freqs = default_freq_grid(args.f0, args.max_harmonic, args.step)
    half = frequency_response("half", cfg, freqs, args.phases)
    full = frequency_response("full", cfg, freqs, args.phases)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["f", "magnitude_halfcycle", "magnitude_fullcycle"])
    for row in zip(freqs, half.magnitude, full.magnitude):
        w.writerow([f"{x:.12e}" for x in row])
    if out is not sys.stdout:
        out.close()

    print(f"{'f/f0':>6} {'half':>8} {'full':>8}", file=sys.stderr)
    for m in (0, 0.5, 1, 1.5, 2, 3, 4, 5, 6):
        f = m * args.f0
        if f <= freqs[-1]:
            print(f"{m:6.1f} {half.at(f):8.4f} {full.at(f):8.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
