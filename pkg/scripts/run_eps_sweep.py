"""Convergence of rescaled commute times on eps-graphs as n grows.

Writes sweep.csv / sweep.svg / summary.json under --out.
"""

import argparse
import json
import os

from resistlab.experiments import ExperimentConfig, run_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/eps_sweep")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--n-list", type=int, nargs="+",
                    default=[500, 1000, 2000, 4000])
    ap.add_argument("--eps-c", type=float, default=2.0)
    ap.add_argument("--seeds", type=int, nargs="+", default=None)
    args = ap.parse_args()
    seeds = args.seeds or [args.seed + k for k in range(5)]
    os.makedirs(args.out, exist_ok=True)
    cfg = ExperimentConfig(
        scenario="eps_sweep",
        n_list=tuple(args.n_list),
        seeds=tuple(seeds),
        pairs_per_graph=30,
        params={"d": args.d, "eps_c": args.eps_c},
        out_csv=os.path.join(args.out, "sweep.csv"),
        out_plot=os.path.join(args.out, "sweep.svg"),
    )
    _, summary = run_scenario(cfg)
    print(json.dumps(summary, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
