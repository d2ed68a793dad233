"""Seeded samplers: point clouds, geometric graphs, and random-graph families.

All randomness flows through numpy Generators seeded from a single 64-bit
seed.  Edge sampling is vectorized over the full upper triangle in a fixed
order, so results do not depend on iteration order.  Sub-streams for
independent trials are derived with SeedSequence.spawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree
from scipy.special import gammaln

from .errors import (
    InvalidDensitySpecError,
    InvalidProbabilityError,
    OddNError,
    ProbabilityOverflowError,
    SpecMismatchError,
)
from .graph import Graph, from_adjacency


def unit_ball_volume(d: int) -> float:
    """Lebesgue volume of the unit ball in R^d."""
    return math.exp(d / 2 * math.log(math.pi) - gammaln(d / 2 + 1))


# ---------------------------------------------------------------------------
# densities and point clouds


@dataclass(frozen=True)
class UniformBox:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or any(
            a >= b for a, b in zip(self.lo, self.hi)
        ):
            raise InvalidDensitySpecError("box must have lo < hi per axis")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)


@dataclass(frozen=True)
class GaussianMixture:
    weights: tuple[float, ...]
    means: tuple[tuple[float, ...], ...]   # one mean per component
    scales: tuple[float, ...]              # isotropic std per component

    def __post_init__(self):
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise InvalidDensitySpecError("mixture weights must sum to 1")
        if len(self.weights) != len(self.means) or len(self.weights) != len(
            self.scales
        ):
            raise InvalidDensitySpecError("component count mismatch")
        if any(s <= 0 for s in self.scales):
            raise InvalidDensitySpecError("scales must be positive")

    @property
    def dim(self) -> int:
        return len(self.means[0])


DensitySpec = UniformBox | GaussianMixture


def evaluate_density(spec: DensitySpec, x: np.ndarray) -> np.ndarray:
    """Density p(x) for a batch of points, shape (m, d) or (d,)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if isinstance(spec, UniformBox):
        lo, hi = np.asarray(spec.lo), np.asarray(spec.hi)
        inside = np.all((x >= lo) & (x <= hi), axis=1)
        return inside / float(np.prod(spec.sides))
    if isinstance(spec, GaussianMixture):
        d = spec.dim
        out = np.zeros(x.shape[0])
        for w, mu, s in zip(spec.weights, spec.means, spec.scales):
            sq = np.sum((x - np.asarray(mu)) ** 2, axis=1)
            out += w * np.exp(-sq / (2 * s * s)) / (2 * math.pi * s * s) ** (d / 2)
        return out
    raise InvalidDensitySpecError(f"unknown density spec {spec!r}")


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray                # (n, d)
    density_spec: DensitySpec
    seed: int

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def sample_points(spec: DensitySpec, n: int, seed: int) -> PointCloud:
    """Draw n i.i.d. points from the density; bit-identical per seed."""
    if n < 1:
        raise InvalidDensitySpecError("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if isinstance(spec, UniformBox):
        lo, hi = np.asarray(spec.lo), np.asarray(spec.hi)
        pts = rng.uniform(size=(n, spec.dim)) * (hi - lo) + lo
    elif isinstance(spec, GaussianMixture):
        comp = rng.choice(len(spec.weights), size=n, p=np.asarray(spec.weights))
        pts = rng.standard_normal((n, spec.dim))
        pts = pts * np.asarray(spec.scales)[comp, None] + np.asarray(spec.means)[
            comp
        ]
    else:
        raise InvalidDensitySpecError(f"unknown density spec {spec!r}")
    return PointCloud(points=pts, density_spec=spec, seed=seed)


def save_point_cloud(cloud: PointCloud, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{cloud.n} {cloud.dim} {cloud.seed}\n")
        for row in cloud.points:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


# ---------------------------------------------------------------------------
# geometric graphs


@dataclass(frozen=True)
class GeometricGraphSpec:
    kind: str                         # eps | knn_symmetric | knn_mutual |
    #                                   gaussian_full | gaussian_truncated
    eps: float | None = None          # threshold / truncation radius
    k: int | None = None
    bandwidth: float | None = None

    def validate(self, n: int) -> None:
        if self.kind in ("eps", "gaussian_truncated"):
            if self.eps is None or self.eps <= 0:
                raise SpecMismatchError("eps must be positive")
        if self.kind in ("knn_symmetric", "knn_mutual"):
            if self.k is None or not (1 <= self.k < n):
                raise SpecMismatchError("need 1 <= k < n")
        if self.kind in ("gaussian_full", "gaussian_truncated"):
            if self.bandwidth is None or self.bandwidth <= 0:
                raise SpecMismatchError("bandwidth must be positive")
        if self.kind not in (
            "eps",
            "knn_symmetric",
            "knn_mutual",
            "gaussian_full",
            "gaussian_truncated",
        ):
            raise SpecMismatchError(f"unknown graph kind {self.kind!r}")


def gaussian_weight(sq_dist: np.ndarray, h: float, d: int) -> np.ndarray:
    """(2 pi h^2)^{-d/2} exp(-r^2 / (2 h^2))."""
    return np.exp(-sq_dist / (2 * h * h)) / (2 * math.pi * h * h) ** (d / 2)


def _knn_pairs(pts: np.ndarray, k: int, mutual: bool) -> set[tuple[int, int]]:
    """kNN edge set; ties broken toward the smaller vertex index.

    cKDTree orders equal distances by index already, which matches the
    tie rule for continuous samples; exact ties are a measure-zero event.
    """
    n = len(pts)
    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=k + 1)  # includes the point itself
    neigh = []
    for i in range(n):
        row = [int(j) for j in idx[i] if j != i][:k]
        neigh.append(set(row))
    pairs = set()
    for i in range(n):
        for j in neigh[i]:
            if mutual:
                if i < j and i in neigh[j]:
                    pairs.add((i, j))
            else:
                pairs.add((min(i, j), max(i, j)))
    return pairs


def build_geometric_graph(cloud: PointCloud, spec: GeometricGraphSpec) -> Graph:
    """eps / kNN / Gaussian similarity graphs on a point cloud."""
    spec.validate(cloud.n)
    pts = cloud.points
    n, d = cloud.n, cloud.dim

    if spec.kind == "eps":
        tree = cKDTree(pts)
        pairs = tree.query_pairs(spec.eps, output_type="ndarray")  # strict <= eps
        W = sp.csr_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)
        )
        W = W + W.T
        return from_adjacency(W)

    if spec.kind in ("knn_symmetric", "knn_mutual"):
        pairs = _knn_pairs(pts, spec.k, mutual=spec.kind == "knn_mutual")
        if not pairs:
            return from_adjacency(sp.csr_matrix((n, n)))
        arr = np.asarray(sorted(pairs))
        W = sp.csr_matrix((np.ones(len(arr)), (arr[:, 0], arr[:, 1])), shape=(n, n))
        W = W + W.T
        return from_adjacency(W)

    # Gaussian kinds: dense weight matrix
    sq = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
    W = gaussian_weight(sq, spec.bandwidth, d)
    np.fill_diagonal(W, 0.0)
    if spec.kind == "gaussian_truncated":
        W = np.where(np.sqrt(sq) <= spec.eps, W, 0.0)
        np.fill_diagonal(W, 0.0)
    return from_adjacency(sp.csr_matrix(W))


# ---------------------------------------------------------------------------
# random graph families


def gen_er(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi with self-loops allowed: every unordered pair, i=j included."""
    if not (0 <= p <= 1):
        raise InvalidProbabilityError("p must be in [0,1]")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    iu, ju = np.triu_indices(n)                 # includes the diagonal
    mask = rng.random(len(iu)) < p
    W = sp.csr_matrix(
        (np.ones(mask.sum()), (iu[mask], ju[mask])), shape=(n, n)
    )
    off = sp.triu(W, k=1)
    W = W + off.T
    return from_adjacency(W, allow_self_loops=True)


def gen_planted_bisection(
    n: int, p_within: float, p_between: float, seed: int
) -> Graph:
    """Two equal clusters: vertices [0, n/2) and [n/2, n); self-loops allowed."""
    if n % 2 != 0:
        raise OddNError("n must be even")
    if not (0 < p_between <= p_within <= 1):
        raise InvalidProbabilityError("need 0 < p_between <= p_within <= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    iu, ju = np.triu_indices(n)
    half = n // 2
    same = (iu < half) == (ju < half)
    probs = np.where(same, p_within, p_between)
    mask = rng.random(len(iu)) < probs
    W = sp.csr_matrix(
        (np.ones(mask.sum()), (iu[mask], ju[mask])), shape=(n, n)
    )
    W = W + sp.triu(W, k=1).T
    return from_adjacency(W, allow_self_loops=True)


def planted_cluster_labels(n: int) -> np.ndarray:
    """Cluster membership used by gen_planted_bisection."""
    labels = np.zeros(n, dtype=np.int64)
    labels[n // 2:] = 1
    return labels


def gen_expected_degrees(dbar: Sequence[float], seed: int) -> Graph:
    """Independent edges with p_ij = dbar_i dbar_j / sum(dbar)."""
    dbar = np.asarray(dbar, dtype=np.float64)
    total = dbar.sum()
    if dbar.max() ** 2 > total:
        raise ProbabilityOverflowError(
            "max_i,j dbar_i dbar_j exceeds sum(dbar); probabilities > 1"
        )
    n = len(dbar)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    iu, ju = np.triu_indices(n)
    probs = dbar[iu] * dbar[ju] / total
    mask = rng.random(len(iu)) < probs
    W = sp.csr_matrix(
        (np.ones(mask.sum()), (iu[mask], ju[mask])), shape=(n, n)
    )
    W = W + sp.triu(W, k=1).T
    return from_adjacency(W, allow_self_loops=True)


# ---------------------------------------------------------------------------
# statistics the appendix bounds


@dataclass(frozen=True)
class RadiusStats:
    r_k_min: float
    r_k_max: float
    d_min: float
    d_max: float
    eta_d: float
    predicted_degree_order: float     # n eps^d eta_d p(ref) for eps-graphs
    predicted_rk_low: float           # a (k/n)^{1/d}
    predicted_rk_high: float          # a~ (k/n)^{1/d}


def radius_and_degree_stats(
    cloud: PointCloud, spec: GeometricGraphSpec, g: Graph
) -> RadiusStats:
    """Exact min/max kNN radii and degrees, plus the predicted orders."""
    pts = cloud.points
    n, d = cloud.n, cloud.dim
    eta = unit_ball_volume(d)
    k = spec.k if spec.k is not None else 1
    tree = cKDTree(pts)
    dist, _ = tree.query(pts, k=k + 1)
    rk = dist[:, -1]

    dens = evaluate_density(cloud.density_spec, pts)
    p_min, p_max = float(dens.min()), float(dens.max())
    if spec.kind == "eps" and spec.eps is not None:
        pred_deg = n * spec.eps**d * eta * p_max
    else:
        pred_deg = float(k)
    a = 1.0 / (2 * p_max * eta) ** (1.0 / d)
    a_tilde = 2.0 / max(p_min * eta, 1e-300) ** (1.0 / d)
    return RadiusStats(
        r_k_min=float(rk.min()),
        r_k_max=float(rk.max()),
        d_min=g.d_min,
        d_max=g.d_max,
        eta_d=eta,
        predicted_degree_order=float(pred_deg),
        predicted_rk_low=float(a * (k / n) ** (1.0 / d)),
        predicted_rk_high=float(a_tilde * (k / n) ** (1.0 / d)),
    )
