"""Full-cycle least squares vs three-sample estimates under a voltage harmonic.

    python3 scripts/long_window_benefit.py --trials 1000 --spc 32 --harmonic 5 --ripple 0.1
"""

import argparse

import numpy as np

from diffeq_relay.analysis import harmonic_corruption_trial
from diffeq_relay.signals import SamplingConfig


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--spc", type=int, default=32, help="samples per cycle")
    p.add_argument("--f0", type=float, default=60.0)
    p.add_argument("--harmonic", type=int, default=5)
    p.add_argument("--ripple", type=float, default=0.10, help="harmonic amplitude relative to the fundamental voltage")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    cfg = SamplingConfig.per_cycle(args.spc, args.f0)
    trials = [harmonic_corruption_trial(rng, cfg, args.harmonic, args.ripple) for _ in range(args.trials)]
    ls = np.array([t.ls_error for t in trials])
    short = np.array([t.three_sample_rms for t in trials])
    wins = int(np.sum(ls < short))

    print(f"least squares better in {wins}/{args.trials} trials ({wins / args.trials:.1%})")
    for name, x in (("least squares", ls), ("three-sample rms", short)):
        q = np.percentile(x, [5, 50, 95])
        print(f"{name:>17}: p5 {q[0]:.3e}  median {q[1]:.3e}  p95 {q[2]:.3e}")


if __name__ == "__main__":
    main()
