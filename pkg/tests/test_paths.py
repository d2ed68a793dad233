import numpy as np
import pytest

from resistlab.generators import (
    GeometricGraphSpec,
    UniformBox,
    build_geometric_graph,
    sample_points,
)
from resistlab.paths import (
    canonical_paths,
    count_paths_through_cell,
    hamming_cell_path,
)
from resistlab.spectral import spectrum


def test_hamming_cell_path_sweeps_coordinates():
    path = hamming_cell_path((0, 0), (2, 1))
    assert path[0] == (0, 0)
    assert path[-1] == (2, 1)
    for a, b in zip(path, path[1:]):
        diff = sum(abs(x - y) for x, y in zip(a, b))
        assert diff == 1  # axis-adjacent cells only


def test_hamming_path_same_cell():
    assert hamming_cell_path((1, 1), (1, 1)) == [(1, 1)]


def test_cell_path_count_bound():
    # exhaustive count of ordered cell pairs routing through the busiest cell
    # is at most d * m^(d+1) where m = cells per axis (grid width 1/m)
    for d in (2, 3):
        for m in (3, 4, 5):
            worst = count_paths_through_cell(m, d)
            assert worst <= d * m ** (d + 1)


def test_canonical_paths_poincare_sound_small():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    for seed in range(3):
        cloud = sample_points(box, 400, seed)
        eps = 0.35
        g = build_geometric_graph(cloud, GeometricGraphSpec(kind="eps", eps=eps))
        stats = canonical_paths(cloud, g, eps, seed=seed)
        s = spectrum(g)
        assert stats.gap_lower_2 > 0
        assert stats.gap_lower_n > 0
        assert stats.gap_lower_2 <= s.gap2 + 1e-12
        assert stats.gap_lower_n <= 1.0 - abs(s.lambda_n) + 1e-12
        assert stats.gamma_max % 2 == 1  # odd-length forcing


def test_canonical_paths_deterministic_under_seed():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    cloud = sample_points(box, 300, 5)
    eps = 0.4
    g = build_geometric_graph(cloud, GeometricGraphSpec(kind="eps", eps=eps))
    s1 = canonical_paths(cloud, g, eps, seed=9)
    s2 = canonical_paths(cloud, g, eps, seed=9)
    assert s1 == s2
