import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import pdist, squareform

from resistlab.errors import (
    InvalidDensitySpecError,
    InvalidProbabilityError,
    OddNError,
    ProbabilityOverflowError,
)
from resistlab.generators import (
    GaussianMixture,
    GeometricGraphSpec,
    UniformBox,
    build_geometric_graph,
    evaluate_density,
    gaussian_weight,
    gen_er,
    gen_expected_degrees,
    gen_planted_bisection,
    planted_cluster_labels,
    sample_points,
    unit_ball_volume,
)
from resistlab.graph import connectivity_flags


def test_unit_ball_volume():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)


def test_sample_points_support_and_determinism():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 2.0))
    c1 = sample_points(box, 50, 7)
    c2 = sample_points(box, 50, 7)
    assert np.array_equal(c1.points, c2.points)
    assert c1.points.shape == (50, 2)
    assert (c1.points >= 0).all()
    assert (c1.points[:, 0] <= 1).all() and (c1.points[:, 1] <= 2).all()
    c3 = sample_points(box, 50, 8)
    assert not np.array_equal(c1.points, c3.points)


def test_uniform_density_value():
    box = UniformBox(lo=(0.0, 0.0), hi=(2.0, 2.0))
    vals = evaluate_density(box, np.array([[1.0, 1.0], [5.0, 5.0]]))
    np.testing.assert_allclose(vals, [0.25, 0.0])


def test_gaussian_mixture_density_integrates_to_one_ish():
    mix = GaussianMixture(weights=(0.5, 0.5), means=((0.0,), (3.0,)), scales=(1.0, 0.5))
    xs = np.linspace(-10, 10, 20001).reshape(-1, 1)
    vals = evaluate_density(mix, xs)
    assert np.trapezoid(vals, xs.ravel()) == pytest.approx(1.0, abs=1e-6)


def test_bad_mixture_weights_rejected():
    with pytest.raises(InvalidDensitySpecError):
        GaussianMixture(weights=(0.5, 0.6), means=((0.0,), (1.0,)), scales=(1.0, 1.0))


def test_eps_graph_edge_predicate_boundary_inclusive():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    cloud = sample_points(box, 150, 3)
    eps = 0.25
    g = build_geometric_graph(cloud, GeometricGraphSpec(kind="eps", eps=eps))
    D = squareform(pdist(cloud.points))
    rng = np.random.default_rng(0)
    for _ in range(1000):
        i, j = rng.integers(0, 150, size=2)
        if i == j:
            continue
        assert (g.weight(int(i), int(j)) == 1.0) == (D[i, j] <= eps)


def test_mutual_subset_of_symmetric():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    for seed in range(5):
        cloud = sample_points(box, 80, seed)
        gs = build_geometric_graph(cloud, GeometricGraphSpec(kind="knn_symmetric", k=5))
        gm = build_geometric_graph(cloud, GeometricGraphSpec(kind="knn_mutual", k=5))
        sym_edges = set(map(tuple, np.array(gs.edge_list())[:, :2].astype(int).tolist()))
        for a, b, _ in gm.edge_list():
            assert (int(a), int(b)) in sym_edges


def test_knn_exact_vs_bruteforce():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    cloud = sample_points(box, 40, 11)
    k = 4
    g = build_geometric_graph(cloud, GeometricGraphSpec(kind="knn_symmetric", k=k))
    D = squareform(pdist(cloud.points))
    np.fill_diagonal(D, np.inf)
    nn = {i: set(np.argsort(D[i], kind="stable")[:k].tolist()) for i in range(40)}
    for i in range(40):
        for j in range(i + 1, 40):
            expect = (j in nn[i]) or (i in nn[j])
            assert (g.weight(i, j) > 0) == expect


def test_gaussian_truncated_weights_bit_exact_on_kept_edges():
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    cloud = sample_points(box, 60, 2)
    full = build_geometric_graph(
        cloud, GeometricGraphSpec(kind="gaussian_full", bandwidth=0.3)
    )
    trunc = build_geometric_graph(
        cloud, GeometricGraphSpec(kind="gaussian_truncated", bandwidth=0.3, eps=0.4)
    )
    D = squareform(pdist(cloud.points))
    for a, b, w in trunc.edge_list():
        assert w == full.weight(int(a), int(b))  # bit-exact
        assert D[int(a), int(b)] <= 0.4
    assert trunc.n_edges < full.n_edges


def test_gaussian_weight_value():
    # (2 pi h^2)^{-d/2} exp(-r^2/(2h^2))
    h, d, r2 = 0.5, 2, 0.3
    expect = (2 * math.pi * h * h) ** (-d / 2) * math.exp(-r2 / (2 * h * h))
    assert gaussian_weight(np.array([r2]), h, d)[0] == pytest.approx(expect, rel=1e-14)


def test_seed_determinism_geometric():
    box = UniformBox(lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0))
    for spec in (
        GeometricGraphSpec(kind="eps", eps=0.3),
        GeometricGraphSpec(kind="knn_mutual", k=6),
    ):
        c1 = sample_points(box, 70, 42)
        c2 = sample_points(box, 70, 42)
        g1 = build_geometric_graph(c1, spec)
        g2 = build_geometric_graph(c2, spec)
        assert g1.edge_list() == g2.edge_list()


def test_er_self_loops_and_determinism():
    g1 = gen_er(100, 0.1, 5)
    g2 = gen_er(100, 0.1, 5)
    assert (g1.weights != g2.weights).nnz == 0
    assert g1.allow_self_loops
    with pytest.raises(InvalidProbabilityError):
        gen_er(10, 1.5, 0)


def test_er_edge_frequency():
    # pooled edge count across seeds close to expectation
    n, p = 60, 0.2
    total = 0
    trials = 30
    for seed in range(trials):
        total += gen_er(n, p, seed).n_edges
    expect = trials * p * (n * (n + 1) / 2)  # self-loops allowed
    assert abs(total - expect) / expect < 0.05


def test_planted_bisection():
    with pytest.raises(OddNError):
        gen_planted_bisection(11, 0.5, 0.1, 0)
    n = 200
    g = gen_planted_bisection(n, 0.5, 0.02, 3)
    labels = planted_cluster_labels(n)
    assert (labels[: n // 2] == 0).all() and (labels[n // 2 :] == 1).all()
    W = np.asarray(g.weights.todense())
    within = W[: n // 2, : n // 2].sum() / 2 + W[n // 2 :, n // 2 :].sum() / 2
    between = W[: n // 2, n // 2 :].sum()
    # densities should reflect p_within >> p_between
    assert within / (2 * (n // 2) * (n // 2 - 1) / 2) > 5 * between / (n // 2) ** 2


def test_expected_degrees():
    dbar = np.full(300, 30.0)
    g = gen_expected_degrees(dbar, 9)
    assert abs(g.degrees.mean() - 30.0) < 3.0
    with pytest.raises(ProbabilityOverflowError):
        gen_expected_degrees(np.array([10.0, 10.0, 1.0]), 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_concentration_of_cell_counts(seed):
    # each of the 4 quadrant cells of [0,1]^2 holds about n/4 points
    box = UniformBox(lo=(0.0, 0.0), hi=(1.0, 1.0))
    n = 400
    cloud = sample_points(box, n, seed)
    idx = (cloud.points >= 0.5).astype(int)
    counts = np.bincount(idx[:, 0] * 2 + idx[:, 1], minlength=4)
    assert counts.min() > n / 4 - 5 * math.sqrt(n)
