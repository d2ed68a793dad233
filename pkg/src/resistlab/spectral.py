"""Spectral gaps and the deviation bounds built on them.

Eigenvalues of the walk matrix P are computed through the symmetric similar
matrix D^{-1/2} W D^{-1/2}, so plain `eigh` applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BipartiteError,
    DisconnectedError,
    EdgeSetMismatchError,
    InvalidProbabilityError,
    NotCompleteError,
    ZeroWeightError,
)
from .graph import Graph, connectivity_flags, normalized_adjacency
from .metrics import PseudoInverse, pair_metrics, pseudo_inverse


@dataclass(frozen=True)
class SpectralSummary:
    lambdas: np.ndarray               # eigenvalues of P, descending
    gap2: float                       # 1 - lambda_2
    gap_abs: float                    # 1 - max(lambda_2, |lambda_n|)

    @property
    def lambda2(self) -> float:
        return float(self.lambdas[1])

    @property
    def lambda_n(self) -> float:
        return float(self.lambdas[-1])


def spectrum(g: Graph) -> SpectralSummary:
    connected, _ = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    lam = np.linalg.eigvalsh(normalized_adjacency(g))[::-1]
    gap2 = 1.0 - float(lam[1])
    gap_abs = 1.0 - max(float(lam[1]), abs(float(lam[-1])))
    return SpectralSummary(lambdas=lam, gap2=gap2, gap_abs=gap_abs)


@dataclass(frozen=True)
class BoundReport:
    i: int
    j: int
    deviation_hitting: float          # |H_ij/vol - 1/d_j|
    deviation_commute: float          # |C_ij/vol - (1/d_i + 1/d_j)|
    bound_hitting_rhs: float
    bound_commute_rhs_tight: float
    bound_commute_rhs_loose: float
    lovasz_rhs: float


def key_prop_bounds(
    g: Graph,
    s: SpectralSummary,
    i: int,
    j: int,
    pinv: PseudoInverse | None = None,
) -> BoundReport:
    """Deviations of the degree approximation and their proven bounds.

    hitting:  |H_ij/vol - 1/d_j| <= 2 (1/(1-lambda_2) + 1) w_max / d_min^2
    commute:  |C_ij/vol - (1/d_i+1/d_j)|
                <= (w_max/d_min) (1/(1-lambda_2) + 2) (1/d_i + 1/d_j)
                <= 2 (1/(1-lambda_2) + 2) w_max / d_min^2
    """
    connected, bipartite = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    if bipartite:
        raise BipartiteError("bounds need lambda_n > -1")
    if pinv is None:
        pinv = pseudo_inverse(g)
    pm = pair_metrics(g, pinv, i, j)
    vol = g.volume
    inv_gap = 1.0 / s.gap2
    wm, dm = g.w_max, g.d_min
    dev_h = abs(pm.hitting_ij / vol - 1.0 / g.degrees[j])
    dev_c = abs(pm.commute / vol - pm.approx)
    return BoundReport(
        i=i,
        j=j,
        deviation_hitting=float(dev_h),
        deviation_commute=float(dev_c),
        bound_hitting_rhs=float(2.0 * (inv_gap + 1.0) * wm / dm**2),
        bound_commute_rhs_tight=float((wm / dm) * (inv_gap + 2.0) * pm.approx),
        bound_commute_rhs_loose=float(2.0 * (inv_gap + 2.0) * wm / dm**2),
        lovasz_rhs=float(lovasz_bound(g, s, i, j)),
    )


def lovasz_bound(g: Graph, s: SpectralSummary, i: int, j: int) -> float:
    """|C_ij/vol - (1/d_i + 1/d_j)| <= (1/(1-lambda_2)) * 2/d_min."""
    connected, bipartite = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    if bipartite:
        raise BipartiteError("bound needs lambda_n > -1")
    return float((1.0 / s.gap2) * 2.0 / g.d_min)


def weighted_gap_bounds(
    g_weighted: Graph, g_unweighted: Graph
) -> tuple[float, float, float]:
    """(zen_upper_on_lambda2, sandwich_lower, sandwich_upper).

    zen: lambda_2 <= (1/2) max_{i,j} sum_k |w_ik/d_i - w_jk/d_j|
    sandwich on gaps: (1-l2_u) w_min/w_max <= 1-l2_w <= (1-l2_u) w_max/w_min
    """
    wt = g_weighted.weights
    ut = g_unweighted.weights
    if wt.shape != ut.shape or ((wt != 0) != (ut != 0)).nnz != 0:
        raise EdgeSetMismatchError("weighted and unweighted edge sets differ")
    if wt.nnz and wt.data.min() <= 0:
        raise ZeroWeightError("weighted graph has a nonpositive stored weight")
    P = wt.toarray() / g_weighted.degrees[:, None]
    # max over pairs of the total-variation-like row distance
    zen = 0.0
    for i in range(g_weighted.n):
        diff = np.abs(P[i][None, :] - P[i + 1:]).sum(axis=1)
        if len(diff):
            zen = max(zen, 0.5 * float(diff.max()))
    gap_u = spectrum(g_unweighted).gap2
    ratio = g_weighted.w_min / g_weighted.w_max
    return zen, float(gap_u * ratio), float(gap_u / ratio)


def fully_connected_bound(g: Graph) -> tuple[float, float]:
    """Both RHS values of the fixed-bandwidth deviation bound:

    |n/vol H_ij - n/d_j| <= 4 n (w_max/w_min) w_max/d_min^2
                         <= 4 (w_max^2/w_min^3) / n
    """
    off_diag_nnz = g.weights.nnz - np.count_nonzero(g.weights.diagonal())
    if off_diag_nnz != g.n * (g.n - 1):
        raise NotCompleteError("graph must be complete")
    wmax, wmin = g.w_max, g.w_min
    rhs1 = 4.0 * g.n * (wmax / wmin) * wmax / g.d_min**2
    rhs2 = 4.0 * wmax**2 / wmin**3 / g.n
    return float(rhs1), float(rhs2)


def gap_order_prediction(
    model: str, n: int, param: float, d: int
) -> tuple[float, float]:
    """Predicted orders for (1 - lambda_2, 1 - |lambda_n|).

    eps model: (eps^2, eps^{d+1}/n); knn: ((k/n)^{2/d}, k^{2/d}/n^{(d+2)/d}).
    Constants are fitted in reports, never asserted.
    """
    if model == "eps":
        eps = float(param)
        return eps**2, eps ** (d + 1) / n
    if model == "knn":
        k = float(param)
        return (k / n) ** (2.0 / d), k ** (2.0 / d) / n ** ((d + 2.0) / d)
    raise ValueError(f"unknown model {model!r}")


def expected_laplacian_comparison(
    p_matrix: np.ndarray, confidence: float = 0.1
) -> tuple[np.ndarray, float]:
    """Spectrum of the expected normalized Laplacian and the concentration
    radius 2 sqrt(3 log(4n/confidence) / dbar_min) around it."""
    P = np.asarray(p_matrix, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise InvalidProbabilityError("probability matrix must be square")
    if not np.allclose(P, P.T):
        raise InvalidProbabilityError("probability matrix must be symmetric")
    if P.min() < 0 or P.max() > 1:
        raise InvalidProbabilityError("probabilities must lie in [0,1]")
    n = P.shape[0]
    dbar = P.sum(axis=1)
    if (dbar <= 0).any():
        raise InvalidProbabilityError("expected degrees must be positive")
    inv_sqrt = 1.0 / np.sqrt(dbar)
    lsym_bar = np.eye(n) - inv_sqrt[:, None] * P * inv_sqrt[None, :]
    mu = np.linalg.eigvalsh(lsym_bar)
    radius = 2.0 * math.sqrt(3.0 * math.log(4.0 * n / confidence) / dbar.min())
    return mu, float(radius)


def planted_expected_lambda2(p_within: float, p_between: float) -> float:
    """Second eigenvalue of the expected walk operator for a planted
    bisection: (p - q) / (p + q); the expected gap is 2q / (p + q)."""
    return (p_within - p_between) / (p_within + p_between)
