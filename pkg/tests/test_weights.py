import itertools
import math

import numpy as np
import pytest

from clusterexp.graphs import Graph, GraphClass, enumerate_graphs, prufer_trees
from clusterexp.potentials import hard_rods, hard_spheres, square_well
from clusterexp.weights import (
    CoefficientEstimate,
    difference_polytope_volume,
    fbar_tree_sum_batch,
    graph_weight_exact_1d,
    graph_weight_mc,
    graph_weight_periodic_1d,
    pair_f_matrix,
    phi_batch,
    phi_t_batch,
    phi_t_value,
)

EDGE = Graph(2, frozenset({(0, 1)}), 1)
TRIANGLE = Graph(3, frozenset({(0, 1), (0, 2), (1, 2)}), 1)
PATH3 = Graph(3, frozenset({(0, 1), (1, 2)}), 1)


def mc_volume(constraints, box, k, n=200_000, seed=3):
    """Monte Carlo oracle for difference-constraint polytope volumes."""
    rng = np.random.default_rng(seed)
    lo, hi = box
    x = rng.uniform(lo, hi, size=(n, k))
    ok = np.ones(n, dtype=bool)
    for i, j, clo, chi in constraints:
        xi = x[:, i] if i >= 0 else 0.0
        xj = x[:, j] if j >= 0 else 0.0
        d = xi - xj
        ok &= (d >= clo) & (d <= chi)
    return (hi - lo) ** k * ok.mean()


class TestPolytopeVolume:
    def test_interval(self):
        # single variable pinned to [0.25, 1.0]
        v = difference_polytope_volume(1, [(0, -1, 0.25, 1.0)])
        assert v == pytest.approx(0.75, abs=1e-12)

    def test_half_square(self):
        # x1, x2 in [0,1], x2 - x1 >= 0
        v = difference_polytope_volume(
            2, [(0, -1, 0.0, 1.0), (1, -1, 0.0, 1.0), (1, 0, 0.0, 10.0)])
        assert v == pytest.approx(0.5, abs=1e-10)

    def test_band_around_diagonal(self):
        cons = [(0, -1, 0.0, 1.0), (1, -1, 0.0, 1.0), (1, 0, -0.25, 0.25)]
        exact = 1.0 - 0.75 ** 2  # unit square minus two corner triangles
        assert difference_polytope_volume(2, cons) == pytest.approx(exact, abs=1e-10)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_3d_against_mc(self, seed):
        rng = np.random.default_rng(seed)
        cons = [(i, -1, -1.0, 1.0) for i in range(3)]
        for _ in range(3):
            i, j = rng.choice(3, size=2, replace=False)
            c = rng.uniform(-0.5, 0.5)
            w = rng.uniform(0.4, 1.2)
            cons.append((int(i), int(j), c - w, c + w))
        v = difference_polytope_volume(3, cons)
        est = mc_volume(cons, (-1.0, 1.0), 3, n=400_000, seed=seed + 10)
        sigma = math.sqrt(max(est, 1e-12) * 8.0 / 400_000) * 8.0
        assert abs(v - est) <= 5 * sigma + 5e-3

    def test_infeasible_is_zero(self):
        cons = [(0, -1, 0.0, 1.0), (1, -1, 0.0, 1.0), (1, 0, 3.0, 4.0)]
        assert difference_polytope_volume(2, cons) == 0.0

    def test_unbounded_raises(self):
        with pytest.raises(ValueError):
            difference_polytope_volume(2, [(1, 0, 0.0, 1.0)])


class TestExact1D:
    def test_edge_weight(self):
        assert graph_weight_exact_1d(EDGE, hard_rods()) == pytest.approx(-2.0, abs=1e-12)

    def test_triangle_weight(self):
        assert graph_weight_exact_1d(TRIANGLE, hard_rods()) == pytest.approx(-3.0, abs=1e-12)

    def test_path_weight(self):
        # int f(x) dx * int f(y) dy for the chain = (-2)^2
        assert graph_weight_exact_1d(PATH3, hard_rods()) == pytest.approx(4.0, abs=1e-12)

    def test_square_well_edge(self):
        p = square_well(sigma=1.0, lam=1.5, epsilon=0.3, beta=1.0, dimension=1)
        expected = -2.0 + 2.0 * 0.5 * math.expm1(0.3)
        assert graph_weight_exact_1d(EDGE, p) == pytest.approx(expected, abs=1e-12)

    def test_matches_quadrature_on_square_well_triangle(self):
        p = square_well(sigma=1.0, lam=1.5, epsilon=0.4, beta=1.0, dimension=1)
        val_exact = graph_weight_exact_1d(TRIANGLE, p)
        # midpoint-rule oracle on a fine grid
        xs = np.linspace(-3.0, 3.0, 1201)
        h = xs[1] - xs[0]
        X, Y = np.meshgrid(xs + h / 2, xs + h / 2, indexing="ij")
        f = p.mayer_f
        val = np.sum(f(np.abs(X)) * f(np.abs(Y)) * f(np.abs(X - Y))) * h * h
        assert val_exact == pytest.approx(val, abs=5e-3)

    def test_two_roots(self):
        # pinned white vertices at distance 0.5: single edge weight f(0.5)
        g = Graph(2, frozenset({(0, 1)}), 2)
        assert graph_weight_exact_1d(g, hard_rods(), root_positions=(0.0, 0.5)) \
            == pytest.approx(-1.0, abs=1e-12)


class TestPeriodic1D:
    def test_edge_periodic(self):
        assert graph_weight_periodic_1d(EDGE, hard_rods(), L=10.0) \
            == pytest.approx(-0.2, abs=1e-12)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            graph_weight_periodic_1d(EDGE, hard_rods(), L=1.5)

    def test_matches_free_weight_for_large_L(self):
        # with L large the periodic images cannot contribute: w_bar = w / L^{n-1}
        free = graph_weight_exact_1d(TRIANGLE, hard_rods())
        per = graph_weight_periodic_1d(TRIANGLE, hard_rods(), L=50.0)
        assert per == pytest.approx(free / 50.0 ** 2, rel=1e-12)


class TestMonteCarlo:
    def test_hard_sphere_edge_zero_variance(self):
        est = graph_weight_mc(EDGE, hard_spheres(), d=3, n_samples=2_000, seed=1)
        assert est.value == pytest.approx(-4.0 * math.pi / 3.0, rel=1e-12)
        assert est.std_error == pytest.approx(0.0, abs=1e-12)

    def test_hard_sphere_triangle(self):
        est = graph_weight_mc(TRIANGLE, hard_spheres(), d=3,
                              n_samples=200_000, seed=7)
        exact = -5.0 * math.pi ** 2 / 6.0
        assert est.agrees_with(exact, n_sigma=4.0)
        assert est.std_error < abs(exact) * 0.02

    def test_mc_matches_exact_1d(self):
        p = square_well(sigma=1.0, lam=1.5, epsilon=0.3, beta=1.0, dimension=1)
        exact = graph_weight_exact_1d(TRIANGLE, p)
        est = graph_weight_mc(TRIANGLE, p, d=1, n_samples=300_000, seed=11)
        assert est.agrees_with(exact, n_sigma=4.0)

    def test_seed_reproducibility(self):
        a = graph_weight_mc(TRIANGLE, hard_spheres(), d=3, n_samples=5_000, seed=5)
        b = graph_weight_mc(TRIANGLE, hard_spheres(), d=3, n_samples=5_000, seed=5)
        assert a.value == b.value and a.std_error == b.std_error


class TestCoefficientEstimate:
    def test_invariants(self):
        with pytest.raises(ValueError):
            CoefficientEstimate(1.0, -0.1, "mc")
        with pytest.raises(ValueError):
            CoefficientEstimate(1.0, 0.5, "exact1d")

    def test_agrees_with(self):
        est = CoefficientEstimate(1.0, 0.1, "mc", samples=10)
        assert est.agrees_with(1.25)
        assert not est.agrees_with(1.5)


class TestPartitionIdentities:
    def setup_method(self):
        rng = np.random.default_rng(42)
        self.p = square_well(sigma=1.0, lam=1.5, epsilon=0.5, beta=1.0, dimension=1)
        self.points = rng.uniform(0.0, 4.0, size=(32, 4, 1))
        diff = self.points[:, :, None, :] - self.points[:, None, :, :]
        self.r = np.linalg.norm(diff, axis=-1)
        self.f = np.asarray(self.p.mayer_f(self.r))
        self.fbar = np.asarray(self.p.mayer_fbar(self.r))
        for m in (self.f, self.fbar):
            idx = np.arange(4)
            m[:, idx, idx] = 0.0

    def graph_sum(self, cls):
        out = np.zeros(len(self.f))
        for g in enumerate_graphs(4, cls):
            term = np.ones(len(self.f))
            for i, j in g.edges:
                term = term * self.f[:, i, j]
            out += term
        return out

    def test_phi_batch_is_all_graph_sum(self):
        got = phi_batch(self.f)[:, -1]
        expect = self.graph_sum(GraphClass.ALL)
        assert np.allclose(got, expect, atol=1e-12)

    def test_phi_t_batch_is_connected_graph_sum(self):
        got = phi_t_batch(self.f)
        expect = self.graph_sum(GraphClass.CONNECTED)
        assert np.allclose(got, expect, atol=1e-12)

    def test_phi_t_value_matches_batch(self):
        v = phi_t_value(self.p, self.points[0])
        assert v == pytest.approx(phi_t_batch(self.f)[0], abs=1e-12)

    def test_matrix_tree_equals_explicit_tree_sum(self):
        got = fbar_tree_sum_batch(self.fbar)
        expect = np.zeros(len(self.fbar))
        for t in prufer_trees(4):
            term = np.ones(len(self.fbar))
            for i, j in t.edges:
                term = term * self.fbar[:, i, j]
            expect += term
        assert np.allclose(got, expect, atol=1e-10)

    def test_pair_f_matrix(self):
        m = pair_f_matrix(self.p, self.points[0])
        assert m.shape == (4, 4)
        assert np.allclose(np.diag(m), 0.0)
        assert np.allclose(m, m.T)
