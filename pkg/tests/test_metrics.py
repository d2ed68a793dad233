import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resistlab.errors import BipartiteError, DisconnectedError
from resistlab.graph import build_graph
from resistlab.metrics import (
    commute_closed_form,
    commute_matrix,
    hitting_closed_form,
    hitting_linear_solve,
    lemma_m_identity_check,
    monte_carlo_hitting,
    pair_metrics,
    pseudo_inverse,
    resistance_via_solve,
)

from conftest import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)


# --- small closed-form oracles ---------------------------------------------


def test_single_edge():
    g = path_graph(2)
    pinv = pseudo_inverse(g)
    assert hitting_closed_form(pinv, g, 0, 1) == pytest.approx(1.0, abs=1e-12)
    pm = pair_metrics(g, pinv, 0, 1)
    assert pm.commute == pytest.approx(2.0, abs=1e-12)
    assert pm.resistance == pytest.approx(1.0, abs=1e-12)


def test_complete_graph_hitting_is_n_minus_1():
    for n in (3, 5, 10):
        g = complete_graph(n)
        pinv = pseudo_inverse(g)
        assert hitting_closed_form(pinv, g, 0, 1) == pytest.approx(n - 1.0, rel=1e-10)
        assert commute_closed_form(pinv, g, 0, 1) == pytest.approx(
            2.0 * (n - 1.0), rel=1e-10
        )


def test_k3_value():
    g = complete_graph(3)
    pinv = pseudo_inverse(g)
    assert hitting_closed_form(pinv, g, 0, 1) == pytest.approx(2.0, rel=1e-12)


def test_star_center_to_leaf():
    # star with L leaves: H(center->leaf) = 2L - 1, H(leaf->center) = 1
    for leaves in (3, 5, 8):
        g = star_graph(leaves)
        pinv = pseudo_inverse(g)
        assert hitting_closed_form(pinv, g, 0, 1) == pytest.approx(
            2 * leaves - 1.0, rel=1e-10
        )
        assert hitting_closed_form(pinv, g, 1, 0) == pytest.approx(1.0, rel=1e-10)


def test_path_resistance_is_series_sum():
    g = build_graph([(0, 1, 2.0), (1, 2, 4.0)], 3)
    pinv = pseudo_inverse(g)
    pm = pair_metrics(g, pinv, 0, 2)
    assert pm.resistance == pytest.approx(1 / 2 + 1 / 4, rel=1e-12)
    assert pm.commute == pytest.approx(g.volume * pm.resistance, rel=1e-12)


def test_hitting_self_is_zero():
    g = cycle_graph(5)
    pinv = pseudo_inverse(g)
    assert hitting_closed_form(pinv, g, 2, 2) == 0.0


def test_disconnected_rejected():
    g = build_graph([(0, 1, 1.0), (2, 3, 1.0)], 4)
    with pytest.raises(DisconnectedError):
        pseudo_inverse(g)
    with pytest.raises(DisconnectedError):
        resistance_via_solve(g, [(0, 2)])


# --- route agreement --------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=3, max_value=30), st.integers(min_value=0, max_value=10**6),
       st.booleans())
def test_closed_form_vs_linear_solve(n, seed, weighted):
    g = random_connected_graph(n, seed, weighted=weighted)
    pinv = pseudo_inverse(g)
    target = seed % n
    hv = hitting_linear_solve(g, target)
    for i in range(n):
        assert hitting_closed_form(pinv, g, i, target) == pytest.approx(
            hv[i], rel=1e-8, abs=1e-8
        )


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=3, max_value=25), st.integers(min_value=0, max_value=10**6))
def test_resistance_solve_vs_pinv(n, seed):
    g = random_connected_graph(n, seed, weighted=True)
    pinv = pseudo_inverse(g)
    pairs = [(i, (i + 1) % n) for i in range(0, n - 1, 2)]
    rs = resistance_via_solve(g, pairs)
    for (i, j), r in zip(pairs, rs):
        pm = pair_metrics(g, pinv, i, j)
        assert pm.resistance == pytest.approx(r, rel=1e-9, abs=1e-12)
        assert pm.commute == pytest.approx(g.volume * r, rel=1e-9)
        assert pm.commute == pytest.approx(pm.hitting_ij + pm.hitting_ji, rel=1e-9)


def test_commute_matrix_agrees_with_pairwise():
    g = random_connected_graph(14, 7, weighted=True)
    pinv = pseudo_inverse(g)
    C = commute_matrix(g, pinv)
    for i in range(0, 14, 3):
        for j in range(14):
            if i == j:
                assert C[i, j] == pytest.approx(0.0, abs=1e-9)
            else:
                assert C[i, j] == pytest.approx(
                    commute_closed_form(pinv, g, i, j), rel=1e-9
                )
    np.testing.assert_allclose(C, C.T, atol=1e-9)


# --- metric axioms ----------------------------------------------------------


def test_resistance_triangle_inequality():
    g = random_connected_graph(12, 13, weighted=True)
    pinv = pseudo_inverse(g)
    R = np.zeros((12, 12))
    for i in range(12):
        for j in range(i + 1, 12):
            R[i, j] = R[j, i] = pair_metrics(g, pinv, i, j).resistance
    for i in range(12):
        for j in range(12):
            for k in range(12):
                assert R[i, j] <= R[i, k] + R[k, j] + 1e-9


def test_rayleigh_monotonicity():
    # adding an edge can only decrease effective resistance
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]
    g1 = build_graph(edges, 5)
    g2 = build_graph(edges + [(0, 4, 1.0)], 5)
    r1 = resistance_via_solve(g1, [(0, 4)])[0]
    r2 = resistance_via_solve(g2, [(0, 4)])[0]
    assert r2 < r1


# --- Monte Carlo ------------------------------------------------------------


def test_monte_carlo_single_edge_exact():
    g = path_graph(2)
    mean, stderr = monte_carlo_hitting(g, 0, 1, walks=500, seed=1)
    assert mean == 1.0
    assert stderr == 0.0


def test_monte_carlo_k3_and_star():
    g = complete_graph(3)
    mean, stderr = monte_carlo_hitting(g, 0, 1, walks=10**5, seed=2)
    assert abs(mean - 2.0) <= 4 * stderr
    s = star_graph(3)
    mean, stderr = monte_carlo_hitting(s, 0, 1, walks=10**5, seed=3)
    assert abs(mean - 5.0) <= 4 * stderr


# --- spectral identity ------------------------------------------------------


def test_m_identity_residual_small():
    for seed in range(5):
        g = random_connected_graph(20, seed, weighted=True)
        pinv = pseudo_inverse(g)
        assert lemma_m_identity_check(pinv, g) < 1e-9


def test_m_identity_rejects_bipartite():
    g = path_graph(4)
    pinv = pseudo_inverse(g)
    with pytest.raises(BipartiteError):
        lemma_m_identity_check(pinv, g)
