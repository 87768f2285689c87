#!/usr/bin/env python3
"""95%-likely throughput of the repulsive strategy against the pilot count.

Shows the pilot-overhead trade-off: more pilots reduce co-pilot interference
but shrink the data fraction of the coherence block.
"""

import argparse

from cfpilot.config import ExperimentConfig, SimConfig
from cfpilot.harness import percentile, run_experiment, throughput_by_strategy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pilots", default="5,8,10,13,16,20")
    parser.add_argument("--aps", type=int, default=100)
    parser.add_argument("--ues", type=int, default=40)
    parser.add_argument("--realizations", type=int, default=200)
    parser.add_argument("--seed", type=int, default=2022)
    parser.add_argument("--strategies", default="repulsive")
    args = parser.parse_args()

    strategies = tuple(s.strip() for s in args.strategies.split(","))
    header = " ".join(f"{name:>10}" for name in strategies)
    print(f"{'tau_p':>6} {header}   [Mbps, 95%-likely]")
    for tp in (int(v) for v in args.pilots.split(",")):
        sim = SimConfig(num_aps=args.aps, num_ues=args.ues, num_pilots=tp,
                        realizations=args.realizations, seed=args.seed)
        cfg = ExperimentConfig(sim=sim, strategies=strategies, power_policy="maxmin")
        groups = throughput_by_strategy(run_experiment(cfg))
        row = " ".join(f"{percentile(groups[name], 0.05) / 1e6:>10.2f}" for name in strategies)
        print(f"{tp:>6} {row}")


if __name__ == "__main__":
    main()
