#!/usr/bin/env python3
"""Per-strategy 95%-likely throughput table across AP densities.

Reproduces the AP-density comparison: for each AP count, runs the paired
experiment with max-min power control and tabulates the 95%-likely per-user
throughput in Mbps.
"""

import argparse

from cfpilot.config import ExperimentConfig, SimConfig
from cfpilot.harness import percentile, run_experiment, throughput_by_strategy

STRATEGIES = ("random", "greedy", "repulsive", "oracle")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--aps", default="100,200,300", help="comma-separated AP counts")
    parser.add_argument("--ues", type=int, default=40)
    parser.add_argument("--pilots", type=int, default=10)
    parser.add_argument("--realizations", type=int, default=200)
    parser.add_argument("--seed", type=int, default=2022)
    args = parser.parse_args()

    print(f"{'M':>5} " + " ".join(f"{name:>10}" for name in STRATEGIES) + "   [Mbps, 95%-likely]")
    for m in (int(v) for v in args.aps.split(",")):
        sim = SimConfig(num_aps=m, num_ues=args.ues, num_pilots=args.pilots,
                        realizations=args.realizations, seed=args.seed)
        cfg = ExperimentConfig(sim=sim, strategies=STRATEGIES, power_policy="maxmin")
        groups = throughput_by_strategy(run_experiment(cfg))
        row = " ".join(f"{percentile(groups[name], 0.05) / 1e6:>10.2f}" for name in STRATEGIES)
        print(f"{m:>5} {row}")


if __name__ == "__main__":
    main()
