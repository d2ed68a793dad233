"""Undirected weighted graphs with Laplacian views.

The adjacency is kept as a symmetric CSR matrix.  A self-loop of weight w
contributes w to the degree once.  Graphs are immutable after construction
and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    NegativeWeightError,
    SelfLoopError,
    ZeroDegreeVertexError,
)


@dataclass(frozen=True)
class Graph:
    n: int
    weights: sp.csr_matrix            # symmetric, nonnegative
    allow_self_loops: bool
    degrees: np.ndarray = field(repr=False)
    volume: float = field(repr=False, default=0.0)

    @property
    def n_edges(self) -> int:
        """Number of undirected edges (self-loops count once)."""
        off = (self.weights.nnz - self.weights.diagonal().astype(bool).sum()) // 2
        return int(off + self.weights.diagonal().astype(bool).sum())

    def edge_list(self) -> list[tuple[int, int, float]]:
        """Undirected edges (i <= j) with weights, sorted."""
        coo = sp.triu(self.weights).tocoo()
        out = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
        return [(int(i), int(j), float(w)) for i, j, w in out]

    def weight(self, i: int, j: int) -> float:
        return float(self.weights[i, j])

    @property
    def w_max(self) -> float:
        return float(self.weights.data.max()) if self.weights.nnz else 0.0

    @property
    def w_min(self) -> float:
        """Smallest stored (positive) weight."""
        return float(self.weights.data.min()) if self.weights.nnz else 0.0

    @property
    def d_min(self) -> float:
        return float(self.degrees.min())

    @property
    def d_max(self) -> float:
        return float(self.degrees.max())


@dataclass(frozen=True)
class LaplacianView:
    kind: str                         # "unnormalized" | "sym" | "transition"
    matrix: sp.spmatrix


def build_graph(
    edges: Iterable[tuple[int, int, float]],
    n: int,
    allow_self_loops: bool = False,
) -> Graph:
    """Build a symmetric graph from an (i, j, w) edge list.

    Zero-weight edges are dropped.  Raises on negative weights, repeated
    unordered pairs, out-of-range indices, and self-loops when not allowed.
    """
    rows, cols, vals = [], [], []
    seen: set[tuple[int, int]] = set()
    for i, j, w in edges:
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRangeError(f"edge ({i},{j}) outside [0,{n})")
        if w < 0:
            raise NegativeWeightError(f"edge ({i},{j}) has weight {w}")
        if i == j and not allow_self_loops:
            raise SelfLoopError(f"self-loop ({i},{i}) not allowed")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
        if w == 0.0:
            continue
        rows.append(i)
        cols.append(j)
        vals.append(w)
        if i != j:
            rows.append(j)
            cols.append(i)
            vals.append(w)
    W = sp.csr_matrix(
        (np.asarray(vals, dtype=np.float64), (rows, cols)), shape=(n, n)
    )
    W.sum_duplicates()
    W.sort_indices()
    return _finish(W, allow_self_loops)


def from_adjacency(W: sp.spmatrix | np.ndarray, allow_self_loops: bool = False) -> Graph:
    """Wrap an already-symmetric nonnegative adjacency matrix."""
    W = sp.csr_matrix(W, dtype=np.float64)
    if W.nnz and W.data.min() < 0:
        raise NegativeWeightError("adjacency has negative entries")
    W.eliminate_zeros()
    W.sort_indices()
    return _finish(W, allow_self_loops)


def _finish(W: sp.csr_matrix, allow_self_loops: bool) -> Graph:
    degrees = np.asarray(W.sum(axis=1)).ravel()
    volume = float(degrees.sum())
    return Graph(
        n=W.shape[0],
        weights=W,
        allow_self_loops=allow_self_loops,
        degrees=degrees,
        volume=volume,
    )


def connectivity_flags(g: Graph) -> tuple[bool, bool]:
    """(connected, bipartite) over the positive-weight edge set.

    A self-loop is an odd cycle, so any graph with one is not bipartite.
    """
    n_comp, labels = connected_components(g.weights, directed=False)
    connected = n_comp == 1
    if g.weights.diagonal().any():
        return connected, False
    # 2-coloring by BFS over each component
    color = np.full(g.n, -1, dtype=np.int8)
    indptr, indices = g.weights.indptr, g.weights.indices
    bipartite = True
    for start in range(g.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack and bipartite:
            u = stack.pop()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    bipartite = False
                    break
        if not bipartite:
            break
    return connected, bipartite


def is_connected(g: Graph) -> bool:
    return connectivity_flags(g)[0]


def laplacian(g: Graph, kind: str) -> LaplacianView:
    """Materialize L = D - W, L_sym = D^{-1/2} L D^{-1/2}, or P = D^{-1} W."""
    if kind not in ("unnormalized", "sym", "transition"):
        raise ValueError(f"unknown laplacian kind {kind!r}")
    d = g.degrees
    if kind == "unnormalized":
        mat = sp.diags(d) - g.weights
        return LaplacianView(kind, mat.tocsr())
    if (d <= 0).any():
        bad = int(np.argmin(d))
        raise ZeroDegreeVertexError(f"vertex {bad} has zero degree")
    if kind == "transition":
        mat = sp.diags(1.0 / d) @ g.weights
        return LaplacianView(kind, mat.tocsr())
    inv_sqrt = sp.diags(1.0 / np.sqrt(d))
    mat = sp.eye(g.n) - inv_sqrt @ g.weights @ inv_sqrt
    return LaplacianView(kind, mat.tocsr())


def normalized_adjacency(g: Graph) -> np.ndarray:
    """Dense D^{-1/2} W D^{-1/2}; symmetric, similar to P."""
    d = g.degrees
    if (d <= 0).any():
        raise ZeroDegreeVertexError("zero-degree vertex")
    inv_sqrt = 1.0 / np.sqrt(d)
    return inv_sqrt[:, None] * g.weights.toarray() * inv_sqrt[None, :]


def save_edge_list(g: Graph, path: str) -> None:
    """Text format: header `n m allow_self_loops`, then `i j w` per edge.

    Weights are printed with shortest round-trip repr, so save/load is exact.
    """
    edges = g.edge_list()
    with open(path, "w") as fh:
        fh.write(f"{g.n} {len(edges)} {int(g.allow_self_loops)}\n")
        for i, j, w in edges:
            fh.write(f"{i} {j} {w!r}\n")


def load_edge_list(path: str) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        n, m, loops = int(header[0]), int(header[1]), bool(int(header[2]))
        edges = []
        for _ in range(m):
            parts = fh.readline().split()
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
    return build_graph(edges, n, allow_self_loops=loops)
