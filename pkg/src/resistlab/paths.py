"""Canonical-path lower bounds on the spectral gap.

Vertex pairs are routed along Hamming paths of grid cells with uniformly
random representatives in the interior cells; the maximum average edge load
feeds the Diaconis-Stroock inequalities

    1 - lambda_2  >=  vol(G) / (d_max^2 |gamma_max| b)
    1 - |lambda_n| >=  2 / (d_max |gamma_max| b)
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import DomainNotRectangleError, EmptyCellError, GridNotValidError
from .generators import PointCloud, UniformBox
from .graph import Graph


@dataclass(frozen=True)
class CanonicalPathStats:
    grid_width: float
    load_b: float                     # max over edges of mean traversal count
    gamma_max: int                    # maximum path length in edges
    gap_lower_2: float
    gap_lower_n: float
    cells_per_axis: tuple[int, ...]


def hamming_cell_path(a: tuple[int, ...], b: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Deterministic cell path: sweep coordinate 1, then 2, ... from a to b."""
    cur = list(a)
    path = [tuple(cur)]
    for axis in range(len(a)):
        step = 1 if b[axis] > cur[axis] else -1
        while cur[axis] != b[axis]:
            cur[axis] += step
            path.append(tuple(cur))
    return path


def count_paths_through_cell(m: int, d: int) -> int:
    """Exhaustive count: max over cells C of ordered cell pairs (A, B)
    whose Hamming path passes through C, on an m^d grid."""
    cells = list(np.ndindex(*([m] * d)))
    through = defaultdict(int)
    for a in cells:
        for b in cells:
            if a == b:
                continue
            for c in hamming_cell_path(a, b):
                through[c] += 1
    return max(through.values())


def _grid_assign(cloud: PointCloud, connect_radius: float):
    if not isinstance(cloud.density_spec, UniformBox):
        raise DomainNotRectangleError("canonical paths need a rectangle domain")
    box = cloud.density_spec
    d = cloud.dim
    lo = np.asarray(box.lo)
    sides = box.sides
    # affine image of the cube: per-axis scale 1/side, L_min = 1/max side
    l_min = 1.0 / float(sides.max())
    width = connect_radius * l_min / math.sqrt(d + 3)   # on the unit cube
    m = np.maximum(np.ceil(1.0 / width - 1e-9).astype(np.int64), 1)
    shape = np.full(d, int(m), dtype=np.int64)
    unit = (cloud.points - lo) / sides                  # mapped to [0,1]^d
    idx = np.minimum((unit * shape).astype(np.int64), shape - 1)
    flat = np.ravel_multi_index(idx.T, shape)
    counts = np.bincount(flat, minlength=int(np.prod(shape)))
    if (counts == 0).any():
        raise EmptyCellError(f"{int((counts == 0).sum())} empty grid cells")
    return idx, flat, shape, 1.0 / float(m)


def canonical_paths(
    cloud: PointCloud,
    g: Graph,
    connect_radius: float,
    seed: int,
    redraws: int = 50,
) -> CanonicalPathStats:
    """Measure the max average edge load over `redraws` independent redraws
    of the path representatives, and the two Poincare lower bounds."""
    idx, flat, shape, width = _grid_assign(cloud, connect_radius)
    n = g.n
    n_cells = int(np.prod(shape))
    order = np.argsort(flat, kind="stable")
    bounds = np.searchsorted(flat[order], np.arange(n_cells + 1))
    members = [order[bounds[c]:bounds[c + 1]] for c in range(n_cells)]

    multi = np.array(np.unravel_index(np.arange(n_cells), shape)).T
    cell_of = flat

    # group unordered vertex pairs by ordered (cell(a), cell(b)) with a < b
    pair_groups: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for a in range(n):
        for b in range(a + 1, n):
            pair_groups[(int(cell_of[a]), int(cell_of[b]))].append((a, b))

    # precompute interior-cell sequences per cell pair
    interiors: dict[tuple[int, int], list[int]] = {}
    direct: dict[tuple[int, int], bool] = {}
    gamma_max = 1
    for (ca, cb) in pair_groups:
        pa, pb = tuple(multi[ca]), tuple(multi[cb])
        cells = hamming_cell_path(pa, pb)
        if len(cells) <= 2:           # same or neighboring cell: direct edge
            direct[(ca, cb)] = True
            interiors[(ca, cb)] = []
            continue
        direct[(ca, cb)] = False
        inner = [int(np.ravel_multi_index(c, shape)) for c in cells[1:-1]]
        interiors[(ca, cb)] = inner
        # path has len(inner)+1 edges; odd-forcing may add one more
        edges = len(inner) + 1
        gamma_max = max(gamma_max, edges + (1 if edges % 2 == 0 else 0))

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    streams = rng.spawn(redraws)
    load_sums: dict[int, float] = defaultdict(float)
    missing_edges = 0
    for trial_rng in streams:
        codes_parts = []
        for (ca, cb), pairs in pair_groups.items():
            pairs_arr = np.asarray(pairs, dtype=np.int64)
            if direct[(ca, cb)]:
                u = pairs_arr[:, 0]
                v = pairs_arr[:, 1]
                codes_parts.append(np.minimum(u, v) * n + np.maximum(u, v))
                continue
            inner = interiors[(ca, cb)]
            t = len(pairs_arr)
            reps = np.empty((t, len(inner)), dtype=np.int64)
            for col, cell in enumerate(inner):
                mem = members[cell]
                reps[:, col] = mem[trial_rng.integers(0, len(mem), size=t)]
            cols = [pairs_arr[:, 0:1], reps]
            n_edges = len(inner) + 1
            if n_edges % 2 == 0:
                # force odd length: revisit the last interior cell with a
                # second, distinct representative (distinct so the extra hop
                # is a real edge and the path length is genuinely odd)
                mem = members[inner[-1]]
                prev = reps[:, -1]
                if len(mem) > 1:
                    extra = mem[trial_rng.integers(0, len(mem), size=t)]
                    for _ in range(64):
                        clash = extra == prev
                        if not clash.any():
                            break
                        extra[clash] = mem[
                            trial_rng.integers(0, len(mem), size=int(clash.sum()))
                        ]
                    for w in np.nonzero(extra == prev)[0]:
                        extra[w] = mem[mem != prev[w]][0]
                else:
                    # single-point cell: detour through the end cell instead
                    mem_end = members[int(cell_of[pairs_arr[0, 1]])]
                    extra = mem_end[trial_rng.integers(0, len(mem_end), size=t)]
                cols.append(extra[:, None])
            cols.append(pairs_arr[:, 1:2])
            seq = np.hstack(cols)
            u = seq[:, :-1].ravel()
            v = seq[:, 1:].ravel()
            keep = u != v             # repeated representative: skip the hop
            codes_parts.append(
                np.minimum(u[keep], v[keep]) * n + np.maximum(u[keep], v[keep])
            )
        codes = np.concatenate(codes_parts)
        uniq, cnt = np.unique(codes, return_counts=True)
        for code, c in zip(uniq.tolist(), cnt.tolist()):
            load_sums[code] += c

    # paths must run along existing edges
    W = g.weights
    b = 0.0
    for code, total in load_sums.items():
        i, j = divmod(code, n)
        if W[i, j] == 0:
            missing_edges += 1
            continue
        b = max(b, total / redraws)
    if missing_edges:
        raise GridNotValidError(
            f"{missing_edges} path hops used non-edges; grid width too large"
        )
    gap2 = g.volume / (g.d_max**2 * gamma_max * b)
    gapn = 2.0 / (g.d_max * gamma_max * b)
    return CanonicalPathStats(
        grid_width=width,
        load_b=float(b),
        gamma_max=int(gamma_max),
        gap_lower_2=float(gap2),
        gap_lower_n=float(gapn),
        cells_per_axis=tuple(int(s) for s in shape),
    )
