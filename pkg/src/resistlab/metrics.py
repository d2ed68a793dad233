"""Ground-truth hitting / commute / resistance computation.

Three independent routes are provided and cross-validated in the tests:

* spectral: full eigendecomposition of L_sym, pseudoinverse applied through
  the closed-form hitting/commute expressions;
* linear solve: the grounded first-step system (I - P) h = 1 on V \\ {j},
  which serves as the reference oracle;
* Monte Carlo: seeded random walks.

For large sparse graphs ``resistance_via_solve`` and
``hitting_times_to_target`` avoid the O(n^3) eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    BipartiteError,
    DisconnectedError,
    EigenFailureError,
    StepCapExceededError,
)
from .graph import Graph, connectivity_flags, normalized_adjacency


@dataclass(frozen=True)
class PseudoInverse:
    """Eigendecomposition of L_sym with the null eigenvalue zeroed out."""

    eigenvalues: np.ndarray           # mu_1 <= ... <= mu_n, ascending
    basis: np.ndarray                 # columns are eigenvectors of L_sym
    cutoff: float
    degrees: np.ndarray
    volume: float

    @property
    def inv_eigenvalues(self) -> np.ndarray:
        inv = np.zeros_like(self.eigenvalues)
        keep = self.eigenvalues > self.cutoff
        inv[keep] = 1.0 / self.eigenvalues[keep]
        return inv

    def matrix(self) -> np.ndarray:
        """Dense L_sym^+ = U diag(mu^+) U^T."""
        return (self.basis * self.inv_eigenvalues) @ self.basis.T

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.inv_eigenvalues * (self.basis.T @ v))


def pseudo_inverse(g: Graph, cutoff_rel: float = 1e-10) -> PseudoInverse:
    """Full symmetric eigendecomposition of L_sym; requires connectivity."""
    connected, _ = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    A = normalized_adjacency(g)
    lsym = np.eye(g.n) - A
    try:
        mu, U = np.linalg.eigh(lsym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigenFailureError(str(exc)) from exc
    cutoff = cutoff_rel * max(float(mu[-1]), 1.0)
    return PseudoInverse(
        eigenvalues=mu,
        basis=U,
        cutoff=cutoff,
        degrees=g.degrees.copy(),
        volume=g.volume,
    )


def hitting_closed_form(pinv: PseudoInverse, g: Graph, i: int, j: int) -> float:
    """H_ij = vol(G) < e_j/sqrt(d_j), L_sym^+ (e_j/sqrt(d_j) - e_i/sqrt(d_i)) >."""
    if i == j:
        return 0.0
    rhs = np.zeros(g.n)
    rhs[j] = 1.0 / np.sqrt(g.degrees[j])
    rhs[i] = -1.0 / np.sqrt(g.degrees[i])
    y = pinv.apply(rhs)
    return float(g.volume * y[j] / np.sqrt(g.degrees[j]))


def commute_closed_form(pinv: PseudoInverse, g: Graph, i: int, j: int) -> float:
    if i == j:
        return 0.0
    rhs = np.zeros(g.n)
    rhs[j] = 1.0 / np.sqrt(g.degrees[j])
    rhs[i] = -1.0 / np.sqrt(g.degrees[i])
    return float(g.volume * rhs @ pinv.apply(rhs))


def hitting_linear_solve(g: Graph, target: int) -> np.ndarray:
    """All hitting times H_{i,target} via the grounded first-step system.

    Solves (I - P restricted to V \\ {target}) h = 1 and pads h_target = 0.
    """
    connected, _ = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    n = g.n
    keep = np.arange(n) != target
    P = sp.diags(1.0 / g.degrees) @ g.weights
    A = (sp.eye(n) - P).tocsr()[keep][:, keep]
    h = spla.spsolve(A.tocsc(), np.ones(n - 1))
    if not np.all(np.isfinite(h)):
        from .errors import SingularSystemError

        raise SingularSystemError("grounded first-step system is singular")
    out = np.zeros(n)
    out[keep] = h
    return out


def monte_carlo_hitting(
    g: Graph,
    i: int,
    j: int,
    walks: int,
    step_cap: int = 10**7,
    seed: int = 0,
) -> tuple[float, float]:
    """Empirical mean and stderr of the first-hit step count over seeded walks.

    Walks are advanced in lock-step with vectorized neighbor sampling; the
    per-walk step counts do not depend on scheduling because each walk
    consumes uniforms only at its own steps of the shared batch draw.
    """
    connected, _ = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    # cumulative transition rows for inverse-CDF sampling
    P = (sp.diags(1.0 / g.degrees) @ g.weights).toarray()
    cum = np.cumsum(P, axis=1)
    cum[:, -1] = 1.0
    state = np.full(walks, i, dtype=np.int64)
    steps = np.zeros(walks, dtype=np.int64)
    active = state != j
    taken = 0
    while active.any():
        if taken >= step_cap:
            raise StepCapExceededError(f"walk exceeded {step_cap} steps")
        u = rng.random(int(active.sum()))
        cur = state[active]
        nxt = (cum[cur] < u[:, None]).sum(axis=1)
        state[active] = nxt
        steps[active] += 1
        active = state != j
        taken += 1
    mean = float(steps.mean())
    if walks > 1:
        stderr = float(steps.std(ddof=1) / np.sqrt(walks))
    else:
        stderr = 0.0
    return mean, stderr


@dataclass(frozen=True)
class PairMetrics:
    i: int
    j: int
    hitting_ij: float
    hitting_ji: float
    commute: float
    resistance: float
    approx: float                     # 1/d_i + 1/d_j


def pair_metrics(g: Graph, pinv: PseudoInverse, i: int, j: int) -> PairMetrics:
    """All exact pair quantities; resistance via the unnormalized quadratic
    form, cross-checked against commute / vol in the tests."""
    h_ij = hitting_closed_form(pinv, g, i, j)
    h_ji = hitting_closed_form(pinv, g, j, i)
    commute = h_ij + h_ji
    # R_ij = <e_i - e_j, L^+ (e_i - e_j)> with L^+ = D^{-1/2} L_sym^+ D^{-1/2}
    rhs = np.zeros(g.n)
    rhs[i] = 1.0 / np.sqrt(g.degrees[i])
    rhs[j] = -1.0 / np.sqrt(g.degrees[j])
    resistance = float(rhs @ pinv.apply(rhs))
    return PairMetrics(
        i=i,
        j=j,
        hitting_ij=h_ij,
        hitting_ji=h_ji,
        commute=commute,
        resistance=resistance,
        approx=float(1.0 / g.degrees[i] + 1.0 / g.degrees[j]),
    )


def lemma_m_identity_check(pinv: PseudoInverse, g: Graph) -> float:
    """Frobenius residual of L_sym^+ = I - P_1 + M with
    M = sum_{r>=2} lambda_r / (1 - lambda_r) P_r assembled from the spectrum
    of A = D^{-1/2} W D^{-1/2}.  Requires a non-bipartite connected graph."""
    connected, bipartite = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    if bipartite:
        raise BipartiteError("lambda_n = -1 on bipartite graphs")
    # eigenpairs of A: lambda = 1 - mu, same eigenvectors as L_sym
    lam = 1.0 - pinv.eigenvalues
    null = pinv.eigenvalues <= pinv.cutoff
    sqrt_d = np.sqrt(g.degrees)
    p1 = np.outer(sqrt_d, sqrt_d) / g.volume
    denom = np.where(null, 1.0, 1.0 - lam)
    coeff = np.where(null, 0.0, lam / denom)
    m = (pinv.basis * coeff) @ pinv.basis.T
    assembled = np.eye(g.n) - p1 + m
    return float(np.linalg.norm(pinv.matrix() - assembled, "fro"))


# ---------------------------------------------------------------------------
# sparse routes for large graphs


def resistance_via_solve(g: Graph, pairs: list[tuple[int, int]]) -> np.ndarray:
    """Effective resistances for many pairs from one sparse factorization.

    Grounds vertex 0 and reads R_ij off the potential difference of the
    current injection e_i - e_j.
    """
    connected, _ = connectivity_flags(g)
    if not connected:
        raise DisconnectedError("graph is disconnected")
    n = g.n
    L = (sp.diags(g.degrees) - g.weights).tocsc()
    lu = spla.splu(L[1:, 1:])
    out = np.empty(len(pairs))
    for idx, (i, j) in enumerate(pairs):
        b = np.zeros(n)
        b[i] += 1.0
        b[j] -= 1.0
        phi = np.zeros(n)
        phi[1:] = lu.solve(b[1:])
        out[idx] = phi[i] - phi[j]
    return out


def hitting_times_to_target(g: Graph, target: int) -> np.ndarray:
    """Alias of the grounded solve, for symmetry with the sparse API."""
    return hitting_linear_solve(g, target)


def commute_matrix(g: Graph, pinv: PseudoInverse) -> np.ndarray:
    """Dense all-pairs commute times C = vol(G) * R from one L_sym^+ build."""
    lp = pinv.matrix() / np.sqrt(g.degrees)[:, None]
    lp /= np.sqrt(g.degrees)[None, :]          # unnormalized L^+
    diag = np.diag(lp)
    return g.volume * (diag[:, None] + diag[None, :] - 2 * lp)
