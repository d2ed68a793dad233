"""Degeneracy of commute distance in moderately high dimension: the
commute nearest neighbor of nearly every vertex is the max-degree vertex."""

import argparse
import json
import os

from resistlab.experiments import ExperimentConfig, run_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/degeneracy")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=1500)
    ap.add_argument("--d", type=int, default=5)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    cfg = ExperimentConfig(
        scenario="degeneracy",
        n_list=(args.n,),
        seeds=(args.seed,),
        params={"d": args.d, "bandwidth": 0.5},
    )
    _, summary = run_scenario(cfg)
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    print(json.dumps(summary, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
