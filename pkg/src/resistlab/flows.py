"""Electrical-network machinery: Thomson energies, harmonic flows, the
degree-based lower bound, and the grid-flow upper bound on geometric graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .errors import (
    BottleneckTooNarrowError,
    DegenerateDegreeError,
    DisconnectedError,
    DomainNotRectangleError,
    EmptyCellError,
    FlowOnMissingEdgeError,
    GridNotValidError,
    InvalidParamsError,
    NotAFlowError,
    PairTooCloseError,
    PreconditionViolatedError,
)
from .generators import PointCloud, UniformBox
from .graph import Graph, is_connected


@dataclass(frozen=True)
class Flow:
    """Unit s-t flow: edge_values[(i, j)] with i < j is the flow i -> j."""

    edge_values: dict[tuple[int, int], float]
    source: int
    sink: int

    def net_divergence(self, n: int) -> np.ndarray:
        div = np.zeros(n)
        for (i, j), u in self.edge_values.items():
            div[i] += u
            div[j] -= u
        return div


def check_flow(g: Graph, f: Flow, tol: float = 1e-9) -> None:
    for (i, j) in f.edge_values:
        if not (0 <= i < j < g.n) or g.weights[i, j] == 0:
            raise FlowOnMissingEdgeError(f"flow on missing edge ({i},{j})")
    div = f.net_divergence(g.n)
    expect = np.zeros(g.n)
    expect[f.source] = 1.0
    expect[f.sink] = -1.0
    if np.abs(div - expect).max() > tol:
        raise NotAFlowError("conservation violated")


def flow_energy(g: Graph, f: Flow) -> float:
    """Thomson energy sum_e u_e^2 / w_e; upper-bounds R_st for any unit flow."""
    check_flow(g, f)
    return float(
        sum(u * u / g.weights[i, j] for (i, j), u in f.edge_values.items())
    )


def harmonic_flow(g: Graph, s: int, t: int) -> Flow:
    """Current flow of the potential solve; attains the Thomson infimum."""
    if not is_connected(g):
        raise DisconnectedError("graph is disconnected")
    n = g.n
    L = (sp.diags(g.degrees) - g.weights).tocsc()
    ground = 0 if s != 0 else 1
    keep = np.arange(n) != ground
    b = np.zeros(n)
    b[s] += 1.0
    b[t] -= 1.0
    phi = np.zeros(n)
    phi[keep] = spla.spsolve(L[keep][:, keep], b[keep])
    coo = sp.triu(g.weights, k=1).tocoo()
    values = {
        (int(i), int(j)): float(w * (phi[i] - phi[j]))
        for i, j, w in zip(coo.row, coo.col, coo.data)
    }
    return Flow(edge_values=values, source=s, sink=t)


def lower_bound_resistance(g: Graph, s: int, t: int) -> float:
    """R_st >= Q_st / (1 + w_st Q_st), Q_st = 1/(d_s - w_st) + 1/(d_t - w_st).

    Requires the graph to stay connected after removing s and t.
    """
    if not is_connected(g):
        raise DisconnectedError("graph is disconnected")
    keep = [v for v in range(g.n) if v not in (s, t)]
    if not keep:
        raise PreconditionViolatedError("no vertices left after removing s, t")
    sub = g.weights[keep][:, keep]
    n_comp, _ = connected_components(sub, directed=False)
    if n_comp != 1:
        raise PreconditionViolatedError("removing s and t disconnects the graph")
    w_st = float(g.weights[s, t])
    ds, dt = float(g.degrees[s]), float(g.degrees[t])
    if ds <= w_st or dt <= w_st:
        raise DegenerateDegreeError("degree does not exceed the direct edge")
    q = 1.0 / (ds - w_st) + 1.0 / (dt - w_st)
    return q / (1.0 + w_st * q)


@dataclass(frozen=True)
class GridFlowParams:
    g: float                          # grid width
    h: float                          # bottleneck width
    n_min: int                        # min points per cell
    a: int                            # floor(h / (2 g sqrt(d-1)))
    q: int                            # max cells between connected points
    dist_st: float
    d_s: float
    d_t: float
    dim: int
    s: int
    t: int


def grid_flow_upper_bound(params: GridFlowParams, dim: int | None = None) -> float:
    """The grid-flow RHS; the bracket term depends on the dimension branch."""
    d = params.dim if dim is None else dim
    if d < 2 or params.a < 1 or params.q < 1 or params.n_min < 1:
        raise InvalidParamsError("need d >= 2, a >= 1, Q >= 1, N_min >= 1")
    inv_deg = 1.0 / params.d_s + 1.0 / params.d_t
    base = inv_deg + inv_deg * 2.0 / params.n_min
    ratio = params.dist_st / params.g
    a = params.a
    if d > 3:
        bracket = 3.0 + ratio / (2 * a + 1) ** 3 + 2.0 * params.q
    elif d == 3:
        bracket = math.log(a) + 2.0 + ratio / (2 * a + 1) ** 2 + 2.0 * params.q
    else:
        bracket = 2.0 * a + 2.0 + ratio / (2 * a + 1) + 2.0 * params.q
    return float(base + bracket / params.n_min**2)


def _cell_index(
    pts: np.ndarray, lo: np.ndarray, width: float, shape: np.ndarray
) -> np.ndarray:
    idx = np.floor((pts - lo) / width).astype(np.int64)
    return np.minimum(np.maximum(idx, 0), shape - 1)


def valid_grid_params(
    cloud: PointCloud,
    g: Graph,
    connect_radius: float,
    s: int,
    t: int,
    boundary_margin: float | None = None,
    check_connectivity: bool = True,
) -> GridFlowParams:
    """Grid of width connect_radius / (2 sqrt(d-1)) on the rectangle domain.

    Checks grid validity (every cell nonempty, same/neighboring-cell points
    connected on this instance, sqrt(d) g <= bottleneck) and the pair
    preconditions.  The bottleneck h is the shortest domain side.  The
    interiority margin defaults to one grid cell diagonal, since the
    literal "distance h from the boundary" is unsatisfiable on a box whose
    bottleneck is its own side.
    """
    if not isinstance(cloud.density_spec, UniformBox):
        raise DomainNotRectangleError("grid flows need a rectangle domain")
    box = cloud.density_spec
    d = cloud.dim
    if d < 2:
        raise InvalidParamsError("need d >= 2")
    lo = np.asarray(box.lo)
    sides = box.sides
    h = float(sides.min())
    width = connect_radius / (2.0 * math.sqrt(d - 1))
    if math.sqrt(d) * width > h:
        raise BottleneckTooNarrowError("sqrt(d) g exceeds the bottleneck")
    shape = np.maximum(np.ceil(sides / width - 1e-9).astype(np.int64), 1)
    eff_width = float((sides / shape).max())  # per-axis widths differ by <= g

    idx = np.floor((cloud.points - lo) / (sides / shape)).astype(np.int64)
    idx = np.minimum(np.maximum(idx, 0), shape - 1)
    flat = np.ravel_multi_index(idx.T, shape)
    counts = np.bincount(flat, minlength=int(np.prod(shape)))
    if (counts == 0).any():
        raise EmptyCellError(f"{int((counts == 0).sum())} empty grid cells")
    n_min = int(counts.min())

    dist_st = float(np.linalg.norm(cloud.points[s] - cloud.points[t]))
    if dist_st <= 4.0 * math.sqrt(d) * eff_width:
        raise PairTooCloseError("pair distance must exceed 4 sqrt(d) g")
    margin = (
        boundary_margin
        if boundary_margin is not None
        else math.sqrt(d) * eff_width
    )
    hi = np.asarray(box.hi)
    for v in (s, t):
        p = cloud.points[v]
        if (p - lo).min() < margin or (hi - p).min() < margin:
            raise PairTooCloseError(f"vertex {v} too close to the boundary")

    if check_connectivity:
        _check_neighbor_connectivity(cloud, g, flat, shape)

    q_cells = int(math.ceil(connect_radius / eff_width))
    a = int(math.floor(h / (2.0 * eff_width * math.sqrt(d - 1))))
    return GridFlowParams(
        g=eff_width,
        h=h,
        n_min=n_min,
        a=a,
        q=q_cells,
        dist_st=dist_st,
        d_s=float(g.degrees[s]),
        d_t=float(g.degrees[t]),
        dim=d,
        s=s,
        t=t,
    )


def _check_neighbor_connectivity(
    cloud: PointCloud, g: Graph, flat: np.ndarray, shape: np.ndarray
) -> None:
    """Instance check of the valid-grid rule: points in the same or (edge-)
    neighboring cells must be adjacent in the graph."""
    d = len(shape)
    members: dict[int, np.ndarray] = {}
    order = np.argsort(flat, kind="stable")
    sorted_flat = flat[order]
    bounds = np.searchsorted(
        sorted_flat, np.arange(int(np.prod(shape)) + 1)
    )
    for c in range(int(np.prod(shape))):
        members[c] = order[bounds[c]:bounds[c + 1]]
    W = g.weights
    multi = np.array(np.unravel_index(np.arange(int(np.prod(shape))), shape)).T
    offsets = []
    for axis in range(d):
        off = np.zeros(d, dtype=np.int64)
        off[axis] = 1
        offsets.append(off)
    for c in range(int(np.prod(shape))):
        base = multi[c]
        groups = [members[c]]
        for off in offsets:
            nb = base + off
            if (nb < shape).all():
                groups.append(members[int(np.ravel_multi_index(nb, shape))])
        own = members[c]
        for grp in groups:
            sub = W[own][:, grp]
            need = len(own) * len(grp)
            if grp is own:
                need -= len(own)      # diagonal entries are not edges
            if sub.nnz < need:
                raise GridNotValidError(
                    "points in same/neighboring cells are not all connected"
                )
