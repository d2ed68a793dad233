"""Command-line front end.

Subcommands: gen, metrics, bounds, sweep, report.  Each takes
--config PATH --out DIR --seed N.  Exit codes: 0 success, 2 for a config
problem, 3 when a mathematical precondition cannot be met on the instance.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import experiments, generators, metrics, spectral
from .errors import ConfigError, PreconditionUnsatisfiableError, ResistlabError
from .generators import (
    GeometricGraphSpec,
    UniformBox,
    build_geometric_graph,
    sample_points,
    save_point_cloud,
)
from .graph import Graph, save_edge_list


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _graph_from_config(cfg: dict, seed: int):
    """Build (graph, cloud-or-None) from a model description."""
    model = cfg.get("model")
    n = cfg.get("n")
    if model is None or n is None:
        raise ConfigError("config needs 'model' and 'n'")
    n = int(n)
    if model in ("eps", "knn_symmetric", "knn_mutual", "gaussian_full",
                 "gaussian_truncated"):
        d = int(cfg.get("d", 2))
        lo = tuple(cfg.get("box_lo", (0.0,) * d))
        hi = tuple(cfg.get("box_hi", (1.0,) * d))
        box = UniformBox(lo=lo, hi=hi)
        try:
            gspec = GeometricGraphSpec(
                kind=model,
                eps=cfg.get("eps"),
                k=cfg.get("k"),
                bandwidth=cfg.get("bandwidth"),
            )
        except ResistlabError as exc:
            raise ConfigError(str(exc)) from exc
        cloud = sample_points(box, n, seed)
        return build_geometric_graph(cloud, gspec), cloud
    if model == "er":
        return generators.gen_er(n, float(cfg["p"]), seed), None
    if model == "planted":
        return (
            generators.gen_planted_bisection(
                n, float(cfg["p_within"]), float(cfg["p_between"]), seed
            ),
            None,
        )
    if model == "expected_degrees":
        dbar = np.asarray(cfg["dbar"], dtype=float)
        return generators.gen_expected_degrees(dbar, seed), None
    raise ConfigError(f"unknown model {model!r}")


def _pairs_from_config(cfg: dict, g: Graph, seed: int) -> list[tuple[int, int]]:
    if "pairs" in cfg:
        pairs = [(int(a), int(b)) for a, b in cfg["pairs"]]
        for a, b in pairs:
            if not (0 <= a < g.n and 0 <= b < g.n) or a == b:
                raise ConfigError(f"bad pair ({a}, {b}) for n={g.n}")
        return pairs
    count = int(cfg.get("num_pairs", 10))
    rng = np.random.default_rng(np.random.SeedSequence([seed, 101]))
    return experiments._distinct_pairs(g.n, count, rng)


def _cmd_gen(cfg: dict, out: str, seed: int) -> None:
    g, cloud = _graph_from_config(cfg, seed)
    save_edge_list(g, os.path.join(out, "graph.txt"))
    if cloud is not None:
        save_point_cloud(cloud, os.path.join(out, "cloud.txt"))
    with open(os.path.join(out, "gen_summary.json"), "w") as fh:
        json.dump(
            {
                "n": g.n,
                "n_edges": g.n_edges,
                "volume": g.volume,
                "d_min": g.d_min,
                "d_max": g.d_max,
            },
            fh,
            indent=2,
        )


def _cmd_metrics(cfg: dict, out: str, seed: int) -> None:
    g, _ = _graph_from_config(cfg, seed)
    pairs = _pairs_from_config(cfg, g, seed)
    pinv = metrics.pseudo_inverse(g)
    with open(os.path.join(out, "metrics.csv"), "w", newline="") as fh:
        fh.write("# schema=1\n")
        w = csv.writer(fh)
        w.writerow(["i", "j", "hitting_ij", "hitting_ji", "commute",
                    "resistance", "approx"])
        for i, j in pairs:
            pm = metrics.pair_metrics(g, pinv, i, j)
            w.writerow([i, j, repr(pm.hitting_ij), repr(pm.hitting_ji),
                        repr(pm.commute), repr(pm.resistance), repr(pm.approx)])


def _cmd_bounds(cfg: dict, out: str, seed: int) -> None:
    g, _ = _graph_from_config(cfg, seed)
    pairs = _pairs_from_config(cfg, g, seed)
    summ = spectral.spectrum(g)
    pinv = metrics.pseudo_inverse(g)
    with open(os.path.join(out, "bounds.csv"), "w", newline="") as fh:
        fh.write("# schema=1\n")
        w = csv.writer(fh)
        w.writerow(["i", "j", "deviation_hitting", "deviation_commute",
                    "bound_hitting_rhs", "bound_commute_rhs_tight",
                    "bound_commute_rhs_loose", "lovasz_rhs"])
        for i, j in pairs:
            rep = spectral.key_prop_bounds(g, summ, i, j, pinv=pinv)
            w.writerow([i, j, repr(rep.deviation_hitting),
                        repr(rep.deviation_commute),
                        repr(rep.bound_hitting_rhs),
                        repr(rep.bound_commute_rhs_tight),
                        repr(rep.bound_commute_rhs_loose),
                        repr(rep.lovasz_rhs)])


def _cmd_sweep(cfg: dict, out: str, seed: int) -> None:
    econf = experiments.ExperimentConfig(
        scenario=cfg["scenario"],
        n_list=tuple(cfg["n_list"]),
        seeds=tuple(cfg.get("seeds", [seed])),
        pairs_per_graph=cfg.get("pairs_per_graph", 30),
        params=cfg.get("params", {}),
        out_csv=os.path.join(out, "sweep.csv"),
        out_plot=os.path.join(out, "sweep.svg"),
    )
    _, summary = experiments.run_scenario(econf)
    with open(os.path.join(out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)


def _cmd_report(cfg: dict, out: str, seed: int) -> None:
    g, _ = _graph_from_config(cfg, seed)
    pinv = metrics.pseudo_inverse(g)
    rep = experiments.degeneracy_report(g, pinv)
    with open(os.path.join(out, "report.json"), "w") as fh:
        json.dump(asdict(rep), fh, indent=2, sort_keys=True)


_COMMANDS = {
    "gen": _cmd_gen,
    "metrics": _cmd_metrics,
    "bounds": _cmd_bounds,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="resistlab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        cfg = _load_json(args.config)
        os.makedirs(args.out, exist_ok=True)
        _COMMANDS[args.command](cfg, args.out, args.seed)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PreconditionUnsatisfiableError as exc:
        print(f"precondition unsatisfiable: {exc}", file=sys.stderr)
        return 3
    except ResistlabError as exc:
        print(f"precondition unsatisfiable: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
