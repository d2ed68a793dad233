"""Sweep engine: seeded desk-scale experiments, CSV tables, and SVG plots.

Every scenario emits one SweepRecord per (seed, n, pair) with a fixed column
order, so a config file reproduces a byte-identical CSV.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Sequence

import numpy as np
import scipy.sparse.linalg as spla

from . import flows, generators, metrics, paths, spectral
from .errors import (
    ConfigError,
    EmptyCellError,
    PairTooCloseError,
    PreconditionUnsatisfiableError,
    ResistlabError,
)
from .generators import (
    GeometricGraphSpec,
    PointCloud,
    UniformBox,
    build_geometric_graph,
    evaluate_density,
    sample_points,
    unit_ball_volume,
)
from .graph import Graph, connectivity_flags, normalized_adjacency

SCENARIOS = (
    "eps_sweep",
    "knn_sweep",
    "gaussian_adapted",
    "er",
    "planted",
    "expected_degrees",
    "weighted_full",
    "degeneracy",
    "gap_check",
    "flow_sandwich",
    "concentration",
)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    n_list: tuple[int, ...]
    seeds: tuple[int, ...]
    pairs_per_graph: int = 30
    params: dict = field(default_factory=dict)
    out_csv: str | None = None
    out_plot: str | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if list(self.n_list) != sorted(set(self.n_list)):
            raise ConfigError("n_list must be strictly increasing")
        if not self.seeds:
            raise ConfigError("need at least one seed")

    @staticmethod
    def from_json(path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
            return ExperimentConfig(
                scenario=raw["scenario"],
                n_list=tuple(raw["n_list"]),
                seeds=tuple(raw["seeds"]),
                pairs_per_graph=raw.get("pairs_per_graph", 30),
                params=raw.get("params", {}),
                out_csv=raw.get("out_csv"),
                out_plot=raw.get("out_plot"),
            )
        except (KeyError, ValueError, OSError) as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class SweepRecord:
    scenario: str
    seed: int
    n: int
    param: float
    i: int
    j: int
    exact_rescaled: float
    approx_rescaled: float
    limit_value: float
    deviation: float
    key_prop_rhs: float
    lovasz_rhs: float
    gap2: float
    runtime_ms: float


RECORD_FIELDS = [f.name for f in fields(SweepRecord)]


# ---------------------------------------------------------------------------
# helpers


def _derived_seed(seed: int, attempt: int) -> int:
    return int(
        np.random.SeedSequence([seed, attempt]).generate_state(1, np.uint64)[0]
    )


def _connected_geometric(
    spec_density, n: int, gspec: GeometricGraphSpec, seed: int, max_tries: int = 20
) -> tuple[PointCloud, Graph, int]:
    """Resample with incremented sub-seeds until the draw is connected."""
    for attempt in range(max_tries):
        cloud = sample_points(spec_density, n, _derived_seed(seed, attempt))
        g = build_geometric_graph(cloud, gspec)
        if connectivity_flags(g)[0]:
            return cloud, g, attempt
    raise PreconditionUnsatisfiableError(
        f"no connected draw in {max_tries} attempts (n={n}, {gspec.kind})"
    )


def _lambda2(g: Graph) -> float:
    """Second eigenvalue of P; sparse Lanczos above the dense crossover."""
    if g.n <= 800:
        A = normalized_adjacency(g)
        lam = np.linalg.eigvalsh(A)
        return float(lam[-2])
    d = g.degrees
    inv_sqrt = 1.0 / np.sqrt(d)
    import scipy.sparse as sp

    A = sp.diags(inv_sqrt) @ g.weights @ sp.diags(inv_sqrt)
    vals = spla.eigsh(A, k=2, which="LA", return_eigenvectors=False)
    return float(np.sort(vals)[0])


def _interior_pairs(
    cloud: PointCloud,
    margin: float,
    min_dist: float,
    count: int,
    rng: np.random.Generator,
) -> tuple[list[tuple[int, int]], float]:
    """Sample pairs with boundary margin and a pairwise distance floor.

    If no pair satisfies the floor, it is halved (repeatedly) until enough
    pairs are admissible; the effective floor is returned alongside.
    """
    box = cloud.density_spec
    if not isinstance(box, UniformBox):
        interior = np.arange(cloud.n)
    else:
        lo, hi = np.asarray(box.lo), np.asarray(box.hi)
        ok = np.all(
            (cloud.points >= lo + margin) & (cloud.points <= hi - margin), axis=1
        )
        interior = np.nonzero(ok)[0]
    if len(interior) < 2:
        raise PreconditionUnsatisfiableError("fewer than 2 interior points")
    pts = cloud.points[interior]
    floor = min_dist
    for _ in range(40):
        pairs = []
        # rejection sampling over interior pairs
        for _ in range(200 * count):
            a, b = rng.integers(0, len(interior), size=2)
            if a == b:
                continue
            if np.linalg.norm(pts[a] - pts[b]) >= floor:
                key = (int(interior[min(a, b)]), int(interior[max(a, b)]))
                if key not in pairs:
                    pairs.append(key)
            if len(pairs) >= count:
                return pairs, floor
        if pairs:
            return pairs, floor
        floor /= 2.0
    raise PreconditionUnsatisfiableError("no admissible interior pair")


def eps_rule(n: int, d: int, c: float) -> float:
    """eps(n) = (c log n / n)^{1/d}; c is calibrated so the smallest sweep
    size stays connected in nearly all pilot seeds."""
    return (c * math.log(n) / n) ** (1.0 / d)


def knn_rule(n: int) -> int:
    """k(n) = ceil(3 log^2 n): grows faster than log n, negligible vs n."""
    return int(math.ceil(3.0 * math.log(n) ** 2))


def adapted_truncation_radius(n: int, h: float, d: int) -> float:
    """Solve eps from h^2 = eps^2 / log(n eps^{d+2}) by fixed-point iteration."""
    eps = h * 2.0
    for _ in range(200):
        val = n * eps ** (d + 2)
        if val <= math.e:
            val = math.e
        new = h * math.sqrt(math.log(val))
        if abs(new - eps) < 1e-14:
            break
        eps = new
    return eps


# ---------------------------------------------------------------------------
# scenarios


def _geometric_sweep(cfg: ExperimentConfig, kind: str) -> tuple[list[SweepRecord], dict]:
    d = int(cfg.params.get("d", 2))
    c_rule = float(cfg.params.get("eps_c", 0.8))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    eta = unit_ball_volume(d)
    records: list[SweepRecord] = []
    discards = 0
    for n in cfg.n_list:
        if kind == "eps":
            eps = eps_rule(n, d, c_rule)
            gspec = GeometricGraphSpec(kind="eps", eps=eps)
            param = eps
            scale_of = lambda g: n * eps**d
            min_dist = 8.0 * eps
            margin = eps
        else:
            k = knn_rule(n)
            gspec = GeometricGraphSpec(kind="knn_symmetric", k=k)
            param = float(k)
            scale_of = lambda g: float(k)
            min_dist = 4.0 * (k / n) ** (1.0 / d)
            margin = (k / n) ** (1.0 / d)
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            cloud, g, tries = _connected_geometric(box, n, gspec, seed)
            discards += tries
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 17]))
            pairs, _ = _interior_pairs(
                cloud, margin, min_dist, cfg.pairs_per_graph, rng
            )
            res = metrics.resistance_via_solve(g, pairs)
            lam2 = _lambda2(g)
            gap2 = 1.0 - lam2
            scale = scale_of(g)
            wm, dm = g.w_max, g.d_min
            key_rhs = (wm / dm) * (1.0 / gap2 + 2.0)
            lov = (1.0 / gap2) * 2.0 / dm
            dens = evaluate_density(cloud.density_spec, cloud.points)
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for (i, j), r in zip(pairs, res):
                commute = g.volume * r
                exact = scale * commute / g.volume
                approx = scale / g.degrees[i] + scale / g.degrees[j]
                if kind == "eps":
                    limit = 1.0 / (eta * dens[i]) + 1.0 / (eta * dens[j])
                else:
                    limit = 2.0
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=param,
                        i=i,
                        j=j,
                        exact_rescaled=float(exact),
                        approx_rescaled=float(approx),
                        limit_value=float(limit),
                        deviation=float(abs(exact - approx)),
                        key_prop_rhs=float(key_rhs * approx),
                        lovasz_rhs=float(lov * scale),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    summary = _convergence_summary(records, cfg.n_list)
    summary["discarded_draws"] = discards
    return records, summary


def _convergence_summary(
    records: Sequence[SweepRecord], n_list: Sequence[int]
) -> dict:
    medians = {}
    for n in n_list:
        devs = [r.deviation for r in records if r.n == n]
        if devs:
            medians[int(n)] = float(np.median(devs))
    ns = sorted(medians)
    decreasing = all(medians[a] > medians[b] for a, b in zip(ns, ns[1:]))
    return {"median_deviation_by_n": medians, "monotone_decreasing": decreasing}


def _gaussian_adapted(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    d = int(cfg.params.get("d", 2))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    bw_exp = float(cfg.params.get("bandwidth_exponent", 0.2))
    records: list[SweepRecord] = []
    for n in cfg.n_list:
        h = n ** (-bw_exp)
        gspec = GeometricGraphSpec(kind="gaussian_full", bandwidth=h)
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            cloud = sample_points(box, n, _derived_seed(seed, 0))
            g = build_geometric_graph(cloud, gspec)
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 23]))
            pairs, _ = _interior_pairs(cloud, h, 0.0, cfg.pairs_per_graph, rng)
            res = metrics.resistance_via_solve(g, pairs)
            lam2 = _lambda2(g)
            gap2 = 1.0 - lam2
            dens = evaluate_density(cloud.density_spec, cloud.points)
            wm, dm = g.w_max, g.d_min
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for (i, j), r in zip(pairs, res):
                commute = g.volume * r
                exact = n * commute / g.volume
                approx = n / g.degrees[i] + n / g.degrees[j]
                limit = 1.0 / dens[i] + 1.0 / dens[j]
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=h,
                        i=i,
                        j=j,
                        exact_rescaled=float(exact),
                        approx_rescaled=float(approx),
                        limit_value=float(limit),
                        deviation=float(abs(exact - approx)),
                        key_prop_rhs=float((wm / dm) * (1.0 / gap2 + 2.0) * approx),
                        lovasz_rhs=float((1.0 / gap2) * 2.0 / dm * n),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    summary = _convergence_summary(records, cfg.n_list)
    # deviation from the density limit, the quantity the sweep is about
    limit_medians = {}
    for n in cfg.n_list:
        vals = [
            abs(r.exact_rescaled - r.limit_value) for r in records if r.n == n
        ]
        if vals:
            limit_medians[int(n)] = float(np.median(vals))
    ns = sorted(limit_medians)
    summary["median_limit_deviation_by_n"] = limit_medians
    summary["limit_monotone_decreasing"] = all(
        limit_medians[a] > limit_medians[b] for a, b in zip(ns, ns[1:])
    )
    return records, summary


def _er_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    p = float(cfg.params.get("p", 0.02))
    records: list[SweepRecord] = []
    max_dev = 0.0
    for n in cfg.n_list:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            g = None
            for attempt in range(20):
                cand = generators.gen_er(n, p, _derived_seed(seed, attempt))
                if connectivity_flags(cand)[0]:
                    g = cand
                    break
            if g is None:
                raise PreconditionUnsatisfiableError("no connected ER draw")
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 31]))
            pairs = _distinct_pairs(n, cfg.pairs_per_graph, rng)
            lam2 = _lambda2(g)
            gap2 = 1.0 - lam2
            targets = sorted({j for _, j in pairs})
            hit = {j: metrics.hitting_linear_solve(g, j) for j in targets}
            dt_ms = (time.perf_counter() - t0) * 1000.0
            hit_rhs = 2.0 * (1.0 / gap2 + 1.0) * g.w_max / g.d_min**2
            for i, j in pairs:
                h_ij = float(hit[j][i])
                dev = abs(h_ij / n - 1.0)
                max_dev = max(max_dev, dev)
                # |H/n - 1| <= (vol/n^2)|nH/vol - n/d_j| + |vol/(n d_j) - 1|
                rhs = g.volume * hit_rhs / n + abs(
                    g.volume / (n * g.degrees[j]) - 1.0
                )
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=p,
                        i=i,
                        j=j,
                        exact_rescaled=float(h_ij / n),
                        approx_rescaled=1.0,
                        limit_value=1.0,
                        deviation=float(dev),
                        key_prop_rhs=float(rhs),
                        lovasz_rhs=float((1.0 / gap2) * 2.0 / g.d_min * n),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    return records, {"max_deviation": float(max_dev), "rate_scale": 1.0 / (cfg.n_list[-1] * p)}


def _distinct_pairs(
    n: int, count: int, rng: np.random.Generator
) -> list[tuple[int, int]]:
    pairs: list[tuple[int, int]] = []
    seen = set()
    while len(pairs) < count:
        a, b = rng.integers(0, n, size=2)
        if a == b:
            continue
        key = (int(min(a, b)), int(max(a, b)))
        if key in seen:
            continue
        seen.add(key)
        pairs.append(key)
    return pairs


def _planted_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    p_w = float(cfg.params.get("p_within", 0.1))
    p_b = float(cfg.params.get("p_between", 0.01))
    records: list[SweepRecord] = []
    within_vals, between_vals = [], []
    lam2_measured = []
    for n in cfg.n_list:
        half = n // 2
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            g = None
            for attempt in range(20):
                cand = generators.gen_planted_bisection(
                    n, p_w, p_b, _derived_seed(seed, attempt)
                )
                if connectivity_flags(cand)[0]:
                    g = cand
                    break
            if g is None:
                raise PreconditionUnsatisfiableError("no connected planted draw")
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 37]))
            k = cfg.pairs_per_graph
            pairs = []
            kinds = []
            for _ in range(k):
                a = int(rng.integers(0, half))
                b = int(rng.integers(0, half))
                while b == a:
                    b = int(rng.integers(0, half))
                pairs.append((min(a, b), max(a, b)))
                kinds.append("within")
            for _ in range(k):
                a = int(rng.integers(0, half))
                b = int(rng.integers(half, n))
                pairs.append((a, b))
                kinds.append("between")
            res = metrics.resistance_via_solve(g, pairs)
            lam2 = _lambda2(g)
            lam2_measured.append(lam2)
            gap2 = 1.0 - lam2
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for (i, j), r, kind in zip(pairs, res, kinds):
                rescaled = n * r  # n C / vol = n R
                (within_vals if kind == "within" else between_vals).append(rescaled)
                approx = n / g.degrees[i] + n / g.degrees[j]
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=p_b,
                        i=i,
                        j=j,
                        exact_rescaled=float(rescaled),
                        approx_rescaled=float(approx),
                        limit_value=2.0 / (p_w + p_b) * 2.0 / 1.0,
                        deviation=float(abs(rescaled - approx)),
                        key_prop_rhs=float(
                            (g.w_max / g.d_min) * (1.0 / gap2 + 2.0) * approx
                        ),
                        lovasz_rhs=float((1.0 / gap2) * 2.0 / g.d_min * n),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    expected_l2 = spectral.planted_expected_lambda2(p_w, p_b)
    n_big = cfg.n_list[-1]
    dbar_min = n_big * (p_w + p_b) / 2.0
    radius = 2.0 * math.sqrt(3.0 * math.log(4.0 * n_big / 0.1) / dbar_min)
    ratio = float(np.median(between_vals) / np.median(within_vals))
    summary = {
        "between_within_ratio": ratio,
        "lambda2_measured": float(np.median(lam2_measured)),
        "lambda2_expected": float(expected_l2),
        "chung_radcliffe_radius": float(radius),
        "lambda2_within_radius": bool(
            abs(np.median(lam2_measured) - expected_l2) <= radius
        ),
    }
    return records, summary


def _expected_degrees_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    records: list[SweepRecord] = []
    for n in cfg.n_list:
        dbar_value = float(cfg.params.get("dbar", max(20.0, 2 * math.log(n) ** 2)))
        dbar = np.full(n, dbar_value)
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            g = None
            for attempt in range(20):
                cand = generators.gen_expected_degrees(
                    dbar, _derived_seed(seed, attempt)
                )
                if connectivity_flags(cand)[0]:
                    g = cand
                    break
            if g is None:
                raise PreconditionUnsatisfiableError("no connected draw")
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 41]))
            pairs = _distinct_pairs(n, cfg.pairs_per_graph, rng)
            res = metrics.resistance_via_solve(g, pairs)
            lam2 = _lambda2(g)
            gap2 = 1.0 - lam2
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for (i, j), r in zip(pairs, res):
                approx = 1.0 / g.degrees[i] + 1.0 / g.degrees[j]
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=dbar_value,
                        i=i,
                        j=j,
                        exact_rescaled=float(r),
                        approx_rescaled=float(approx),
                        limit_value=0.0,
                        deviation=float(abs(r - approx)),
                        key_prop_rhs=float(
                            (g.w_max / g.d_min) * (1.0 / gap2 + 2.0) * approx
                        ),
                        lovasz_rhs=float((1.0 / gap2) * 2.0 / g.d_min),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    return records, _convergence_summary(records, cfg.n_list)


def _weighted_full_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    d = int(cfg.params.get("d", 2))
    h = float(cfg.params.get("bandwidth", 0.3))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    gspec = GeometricGraphSpec(kind="gaussian_full", bandwidth=h)
    records: list[SweepRecord] = []
    all_hold = True
    for n in cfg.n_list:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            cloud = sample_points(box, n, _derived_seed(seed, 0))
            g = build_geometric_graph(cloud, gspec)
            rhs1, rhs2 = spectral.fully_connected_bound(g)
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 43]))
            pairs = _distinct_pairs(n, cfg.pairs_per_graph, rng)
            lam2 = _lambda2(g)
            gap2 = 1.0 - lam2
            targets = sorted({j for _, j in pairs})
            hit = {j: metrics.hitting_linear_solve(g, j) for j in targets}
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for i, j in pairs:
                h_ij = float(hit[j][i])
                dev = abs(n * h_ij / g.volume - n / g.degrees[j])
                all_hold &= dev <= rhs1 + 1e-12
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=h,
                        i=i,
                        j=j,
                        exact_rescaled=float(n * h_ij / g.volume),
                        approx_rescaled=float(n / g.degrees[j]),
                        limit_value=float(rhs2),
                        deviation=float(dev),
                        key_prop_rhs=float(rhs1),
                        lovasz_rhs=float((1.0 / gap2) * 2.0 / g.d_min * n),
                        gap2=float(gap2),
                        runtime_ms=dt_ms,
                    )
                )
    return records, {"bound_holds_everywhere": bool(all_hold)}


def _gap_check_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    model = cfg.params.get("model", "eps")
    d = int(cfg.params.get("d", 2))
    c_rule = float(cfg.params.get("eps_c", 0.8))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    records: list[SweepRecord] = []
    ratios = []
    for n in cfg.n_list:
        if model == "eps":
            eps = eps_rule(n, d, c_rule)
            gspec = GeometricGraphSpec(kind="eps", eps=eps)
            param = eps
        else:
            k = knn_rule(n)
            gspec = GeometricGraphSpec(kind="knn_symmetric", k=k)
            param = float(k)
        pred2, predn = spectral.gap_order_prediction(model, n, param, d)
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            cloud, g, _ = _connected_geometric(box, n, gspec, seed)
            summ = spectral.spectrum(g)
            dt_ms = (time.perf_counter() - t0) * 1000.0
            ratios.append(summ.gap2 / pred2)
            records.append(
                SweepRecord(
                    scenario=cfg.scenario,
                    seed=seed,
                    n=n,
                    param=param,
                    i=-1,
                    j=-1,
                    exact_rescaled=float(summ.gap2),
                    approx_rescaled=float(pred2),
                    limit_value=float(predn),
                    deviation=float(abs(summ.gap2 - pred2)),
                    key_prop_rhs=0.0,
                    lovasz_rhs=0.0,
                    gap2=float(summ.gap2),
                    runtime_ms=dt_ms,
                )
            )
    fitted = float(np.median(ratios))
    return records, {
        "fitted_gap2_constant": fitted,
        "gap2_over_prediction_range": [float(min(ratios)), float(max(ratios))],
    }


def _flow_sandwich_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    d = int(cfg.params.get("d", 2))
    eps = float(cfg.params.get("eps", 0.2))
    lo = tuple(cfg.params.get("box_lo", (0.0,) * d))
    hi = tuple(cfg.params.get("box_hi", (1.0,) * d))
    box = UniformBox(lo=lo, hi=hi)
    gspec = GeometricGraphSpec(kind="eps", eps=eps)
    # at d=2 the canonical width eps/2 leaves neighboring cells with pairs up
    # to eps*sqrt(5)/2 apart, so shrink the routing radius until the
    # neighbor-connectivity guarantee g*sqrt(d+3) <= eps actually holds
    conn = float(cfg.params.get("routing_radius", 0.85 * eps if d == 2 else eps))
    records: list[SweepRecord] = []
    checked = 0
    holds = 0
    skipped: dict[str, int] = {}
    for n in cfg.n_list:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            cloud, g, _ = _connected_geometric(box, n, gspec, seed)
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, 47]))
            width = conn / (2.0 * math.sqrt(d - 1))
            min_side = float(np.min(np.asarray(hi) - np.asarray(lo)))
            margin = float(
                cfg.params.get(
                    "boundary_margin",
                    min(math.sqrt(d) * width, 0.4 * min_side),
                )
            )
            try:
                pairs, _ = _interior_pairs(
                    cloud,
                    margin,
                    4.0 * math.sqrt(d) * width * 1.05,
                    cfg.pairs_per_graph,
                    rng,
                )
            except PreconditionUnsatisfiableError:
                skipped["no_interior_pair"] = skipped.get("no_interior_pair", 0) + 1
                continue
            res = metrics.resistance_via_solve(g, pairs)
            dt_ms = (time.perf_counter() - t0) * 1000.0
            for (s, t), r in zip(pairs, res):
                try:
                    params = flows.valid_grid_params(
                        cloud, g, conn, s, t, boundary_margin=margin
                    )
                    upper = flows.grid_flow_upper_bound(params)
                    lower = flows.lower_bound_resistance(g, s, t)
                except ResistlabError as exc:
                    name = type(exc).__name__
                    skipped[name] = skipped.get(name, 0) + 1
                    continue
                checked += 1
                holds += int(lower - 1e-12 <= r <= upper + 1e-12)
                records.append(
                    SweepRecord(
                        scenario=cfg.scenario,
                        seed=seed,
                        n=n,
                        param=eps,
                        i=s,
                        j=t,
                        exact_rescaled=float(r),
                        approx_rescaled=float(upper),
                        limit_value=float(lower),
                        deviation=float(abs(upper - r)),
                        key_prop_rhs=float(upper),
                        lovasz_rhs=0.0,
                        gap2=0.0,
                        runtime_ms=dt_ms,
                    )
                )
    return records, {
        "pairs_checked": checked,
        "sandwich_holds": holds,
        "skipped": skipped,
    }


def _concentration_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    """Empirical check of the cell-count concentration bound on fixed cells."""
    d = 2
    m = int(cfg.params.get("cells_per_axis", 4))
    delta = float(cfg.params.get("delta", 0.5))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    n = cfg.n_list[-1]
    b_min = 1.0 / m**d                # uniform density: equal mass cells
    thresh = (1.0 - delta) * n * b_min
    hits = 0
    trials = len(cfg.seeds)
    for seed in cfg.seeds:
        cloud = sample_points(box, n, seed)
        idx = np.minimum((cloud.points * m).astype(np.int64), m - 1)
        flat = idx[:, 0] * m + idx[:, 1]
        counts = np.bincount(flat, minlength=m * m)
        if counts.min() <= thresh:
            hits += 1
    bound = m * m * math.exp(-delta**2 * n * b_min / 3.0)
    freq = hits / trials
    sigma = math.sqrt(max(bound * (1 - bound), 1e-12) / trials)
    summary = {
        "observed_frequency": float(freq),
        "union_bound": float(bound),
        "slack_sigma": float(sigma),
        "within_bound": bool(freq <= bound + 3.0 * max(sigma, math.sqrt(freq / trials + 1e-12))),
    }
    return [], summary


# ---------------------------------------------------------------------------
# degeneracy report


@dataclass(frozen=True)
class DegeneracyReport:
    argmax_degree_vertex: int
    approx_nn_fraction: float         # fraction with approx-NN = argmax degree
    exact_nn_fraction: float          # fraction with commute-NN = argmax degree
    mean_rank_correlation: float
    median_relative_deviation: float


def degeneracy_report(g: Graph, pinv: metrics.PseudoInverse) -> DegeneracyReport:
    from scipy.stats import spearmanr

    connected, bipartite = connectivity_flags(g)
    if not connected or bipartite:
        raise ConfigError("degeneracy report needs a connected non-bipartite graph")
    C = metrics.commute_matrix(g, pinv)
    inv_d = 1.0 / g.degrees
    A = inv_d[:, None] + inv_d[None, :]
    off = ~np.eye(g.n, dtype=bool)
    rel_dev = np.abs(C[off] / g.volume - A[off]) / A[off]
    np.fill_diagonal(C, np.inf)
    np.fill_diagonal(A, np.inf)
    vstar = int(np.argmax(g.degrees))
    nn_exact = np.argmin(C, axis=1)
    nn_approx = np.argmin(A, axis=1)
    others = np.arange(g.n) != vstar
    approx_frac = float(np.mean(nn_approx[others] == vstar))
    exact_frac = float(np.mean(nn_exact[others] == vstar))
    rhos = []
    sample = np.linspace(0, g.n - 1, min(g.n, 200)).astype(int)
    for i in sample:
        mask = np.arange(g.n) != i
        rho, _ = spearmanr(C[i][mask], A[i][mask])
        rhos.append(rho)
    med = float(np.median(rel_dev))
    return DegeneracyReport(
        argmax_degree_vertex=vstar,
        approx_nn_fraction=approx_frac,
        exact_nn_fraction=exact_frac,
        mean_rank_correlation=float(np.mean(rhos)),
        median_relative_deviation=med,
    )


def _degeneracy_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    d = int(cfg.params.get("d", 5))
    h = float(cfg.params.get("bandwidth", 0.5))
    box = UniformBox(lo=(0.0,) * d, hi=(1.0,) * d)
    gspec = GeometricGraphSpec(kind="gaussian_full", bandwidth=h)
    n = cfg.n_list[-1]
    cloud = sample_points(box, n, _derived_seed(cfg.seeds[0], 0))
    g = build_geometric_graph(cloud, gspec)
    pinv = metrics.pseudo_inverse(g)
    rep = degeneracy_report(g, pinv)
    return [], asdict(rep)


# ---------------------------------------------------------------------------
# dispatch, CSV, plots


_DISPATCH: dict[str, Callable[[ExperimentConfig], tuple[list[SweepRecord], dict]]] = {
    "eps_sweep": lambda cfg: _geometric_sweep(cfg, "eps"),
    "knn_sweep": lambda cfg: _geometric_sweep(cfg, "knn"),
    "gaussian_adapted": _gaussian_adapted,
    "er": _er_scenario,
    "planted": _planted_scenario,
    "expected_degrees": _expected_degrees_scenario,
    "weighted_full": _weighted_full_scenario,
    "degeneracy": _degeneracy_scenario,
    "gap_check": _gap_check_scenario,
    "flow_sandwich": _flow_sandwich_scenario,
    "concentration": _concentration_scenario,
}


def run_scenario(cfg: ExperimentConfig) -> tuple[list[SweepRecord], dict]:
    records, summary = _DISPATCH[cfg.scenario](cfg)
    records.sort(key=lambda r: (r.scenario, r.seed, r.n, r.i, r.j))
    if cfg.out_csv:
        emit_csv(records, cfg.out_csv)
    if cfg.out_plot and records:
        emit_plot(records, cfg.out_plot)
    return records, summary


def emit_csv(
    records: Sequence[SweepRecord], path: str, normalize_runtime: bool = True
) -> None:
    """CSV with a `# schema=1` comment line, header, and repr'd floats.

    Wall-clock timings are written as 0.0 by default so that the same config
    always produces a byte-identical file; pass normalize_runtime=False to
    keep the measured values.
    """
    with open(path, "w", newline="") as fh:
        fh.write("# schema=1\n")
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL)
        writer.writerow(RECORD_FIELDS)
        for r in records:
            row = []
            for name in RECORD_FIELDS:
                v = getattr(r, name)
                if name == "runtime_ms" and normalize_runtime:
                    v = 0.0
                row.append(repr(v) if isinstance(v, float) else v)
            writer.writerow(row)


def parse_csv(path: str) -> list[SweepRecord]:
    out = []
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("# schema="):
            raise ConfigError("missing schema comment line")
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(
                SweepRecord(
                    scenario=row["scenario"],
                    seed=int(row["seed"]),
                    n=int(row["n"]),
                    param=float(row["param"]),
                    i=int(row["i"]),
                    j=int(row["j"]),
                    exact_rescaled=float(row["exact_rescaled"]),
                    approx_rescaled=float(row["approx_rescaled"]),
                    limit_value=float(row["limit_value"]),
                    deviation=float(row["deviation"]),
                    key_prop_rhs=float(row["key_prop_rhs"]),
                    lovasz_rhs=float(row["lovasz_rhs"]),
                    gap2=float(row["gap2"]),
                    runtime_ms=float(row["runtime_ms"]),
                )
            )
    return out


def emit_plot(records: Sequence[SweepRecord], path: str) -> None:
    """Log-log median deviation vs n, one series per parameter value, with
    a guide line of the mean fitted slope.  Written as timestamp-free SVG."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "resistlab"  # deterministic ids
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    by_param: dict[float, dict[int, list[float]]] = {}
    for r in records:
        by_param.setdefault(round(r.param, 12), {}).setdefault(r.n, []).append(
            r.deviation
        )
    for param, per_n in sorted(by_param.items()):
        ns = sorted(per_n)
        meds = [float(np.median(per_n[n])) for n in ns]
        ax.loglog(ns, meds, "o-", label=f"param={param:.4g}")
    ns_all = sorted({r.n for r in records})
    if len(ns_all) >= 2:
        devs0 = [
            float(np.median([r.deviation for r in records if r.n == n]))
            for n in ns_all
        ]
        if all(v > 0 for v in devs0):
            slope = np.polyfit(np.log(ns_all), np.log(devs0), 1)[0]
            guide = devs0[0] * (np.asarray(ns_all) / ns_all[0]) ** slope
            ax.loglog(ns_all, guide, "k--", label=f"slope {slope:.2f}")
    ax.set_xlabel("n")
    ax.set_ylabel("median deviation")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
