"""p-Laplacian operator, p-spectral cuts, and coupling-graph extraction."""

from __future__ import annotations

import numpy as np
import pytest

import spectral_abstraction as sa
from spectral_abstraction.errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    ExponentOutOfRangeError,
)
from spectral_abstraction.nonlinear import (
    CouplingSystem,
    PLaplacianParams,
    jacobian_graph,
    p_laplacian_apply,
    p_recursive_bipartition,
    p_spectral_bipartition,
)

from conftest import random_connected_graph
from oracles import best_bipartition


class TestPLaplacianApply:
    def test_constant_vector_maps_to_zero(self, bridged_triangles):
        out = p_laplacian_apply(bridged_triangles, np.full(6, 3.7), 1.5)
        assert np.abs(out).max() == 0.0

    def test_single_edge_by_hand(self):
        g = sa.graph_from_edges(["a", "b"], [(0, 1, 1.0)])
        out = p_laplacian_apply(g, np.array([0.0, 1.0]), 1.5)
        assert np.abs(out - np.array([-1.0, 1.0])).max() < 1e-15

    def test_p2_equals_laplacian_product(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            n = int(rng.integers(3, 15))
            g = random_connected_graph(rng, n)
            f = rng.normal(size=n)
            L = np.asarray(sa.laplacian(g, sa.LaplacianKind.COMBINATORIAL).matrix)
            assert np.abs(p_laplacian_apply(g, f, 2.0) - L @ f).max() < 1e-10

    def test_exponent_bounds(self, triangle):
        f = np.array([1.0, 0.0, -1.0])
        with pytest.raises(ExponentOutOfRangeError):
            p_laplacian_apply(triangle, f, 1.0)
        with pytest.raises(ExponentOutOfRangeError):
            p_laplacian_apply(triangle, f, 2.5)

    def test_length_mismatch(self, triangle):
        with pytest.raises(DimensionMismatchError):
            p_laplacian_apply(triangle, np.ones(4), 1.5)


class TestParams:
    def test_exponent_validation(self):
        with pytest.raises(ExponentOutOfRangeError):
            PLaplacianParams(p=1.0)
        with pytest.raises(ExponentOutOfRangeError):
            PLaplacianParams(p=2.1)

    def test_step_and_tolerance_validation(self):
        with pytest.raises(ValueError):
            PLaplacianParams(p=1.5, continuation_steps=0)
        with pytest.raises(ValueError):
            PLaplacianParams(p=1.5, inner_tolerance=0.0)
        with pytest.raises(ValueError):
            PLaplacianParams(p=1.5, max_iterations=0)


class TestPSpectralBipartition:
    def test_bridged_triangles_match_exhaustive_cheeger_optimum(self, bridged_triangles):
        p = p_spectral_bipartition(bridged_triangles, PLaplacianParams(p=1.2))
        assert p.assignment == (0, 0, 0, 1, 1, 1)
        _value, best_side = best_bipartition(6, bridged_triangles.edges, "cheeger")
        assert best_side == frozenset({3, 4, 5})

    def test_p2_reproduces_the_thresholded_fiedler_cut(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = int(rng.integers(4, 16))
            g = random_connected_graph(rng, n)
            p2 = p_spectral_bipartition(g, PLaplacianParams(p=2.0, continuation_steps=1))
            v = sa.fiedler_vector(sa.graph_spectrum(g, sa.LaplacianKind.COMBINATORIAL))
            linear = sa.threshold_partition(g, v, "cheeger")
            ours = sa.cut_metrics(g, p2).cheeger
            ref = sa.cut_metrics(g, linear).cheeger
            assert abs(ours - ref) < 1e-9

    def test_invariant_to_uniform_weight_scaling(self, bridged_triangles):
        params = PLaplacianParams(p=1.3)
        base = p_spectral_bipartition(bridged_triangles, params)
        for c in (1e-3, 7.0, 1e4):
            scaled = sa.graph_from_edges(
                bridged_triangles.labels,
                [(i, j, w * c) for i, j, w in bridged_triangles.edges],
            )
            assert p_spectral_bipartition(scaled, params).assignment == base.assignment

    def test_low_p_cheeger_beats_linear_in_the_median(self):
        deltas = []
        for seed in range(6):
            g = sa.sbm_generate(2, 6, 0.9, 0.05, seed=seed)
            if len(sa.connected_components(g)) > 1:
                continue
            c12 = sa.cut_metrics(g, p_spectral_bipartition(g, PLaplacianParams(p=1.2))).cheeger
            c20 = sa.cut_metrics(
                g, p_spectral_bipartition(g, PLaplacianParams(p=2.0, continuation_steps=1))
            ).cheeger
            deltas.append(c12 - c20)
        assert np.median(deltas) <= 1e-12

    def test_ratio_and_normalized_selections_run(self, bridged_triangles):
        for selection in ("ratio", "normalized"):
            p = p_spectral_bipartition(
                bridged_triangles, PLaplacianParams(p=1.5), selection=selection
            )
            assert p.assignment == (0, 0, 0, 1, 1, 1)

    def test_unknown_selection_rejected(self, bridged_triangles):
        with pytest.raises(ValueError):
            p_spectral_bipartition(bridged_triangles, PLaplacianParams(p=1.5), selection="best")

    def test_disconnected_graph_rejected(self, two_k3):
        with pytest.raises(DisconnectedGraphError):
            p_spectral_bipartition(two_k3, PLaplacianParams(p=1.5))


class TestPRecursive:
    def test_k1_identity(self, bridged_triangles):
        p = p_recursive_bipartition(bridged_triangles, 1, PLaplacianParams(p=1.2))
        assert p.assignment == (0,) * 6

    def test_bridged_k2_planted(self, bridged_triangles):
        p = p_recursive_bipartition(bridged_triangles, 2, PLaplacianParams(p=1.2))
        assert p.assignment == (0, 0, 0, 1, 1, 1)

    def test_p2_matches_linear_recursion(self):
        params = PLaplacianParams(p=2.0, continuation_steps=1)
        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(5, 14))
            g = random_connected_graph(rng, n)
            k = int(rng.integers(2, min(4, n) + 1))
            a = p_recursive_bipartition(g, k, params)
            b = sa.recursive_bipartition(g, k)
            assert a.assignment == b.assignment

    def test_k_out_of_range(self, triangle):
        with pytest.raises(sa.errors.KOutOfRangeError):
            p_recursive_bipartition(triangle, 9, PLaplacianParams(p=1.5))


class TestJacobianGraph:
    def test_linear_chain_gives_a_path(self):
        c = np.zeros((4, 4))
        m = np.zeros((4, 4), dtype=bool)
        for i in range(3):
            c[i, i + 1] = 1.0
            m[i, i + 1] = True
        g, largest = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 0.5)
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0))
        assert g.labels == ("x0", "x1", "x2", "x3")
        assert largest == (0, 1, 2, 3)

    def test_all_false_mask_gives_edgeless_graph(self):
        c = np.ones((3, 3))
        m = np.zeros((3, 3), dtype=bool)
        g, largest = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 0.0)
        assert g.edges == ()
        assert largest == (0,)

    def test_largest_component_wins(self):
        c = np.zeros((5, 5))
        m = np.zeros((5, 5), dtype=bool)
        for i, j in ((0, 1), (1, 2), (0, 2), (3, 4)):
            c[i, j] = 2.0
            m[i, j] = True
        _g, largest = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 1.0)
        assert largest == (0, 1, 2)

    def test_threshold_is_strict(self):
        c = np.zeros((2, 2))
        c[0, 1] = 1.0
        m = np.array([[False, True], [False, False]])
        g, _ = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 1.0)
        assert g.edges == ()
        g, _ = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 0.999)
        assert g.edges == ((0, 1, 1.0),)

    def test_either_direction_of_mask_or_magnitude_counts(self):
        c = np.zeros((2, 2))
        c[1, 0] = -3.0
        m = np.array([[False, True], [False, False]])
        g, _ = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 2.0)
        assert g.edges == ((0, 1, 1.0),)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(2)
        n = 6
        c = rng.normal(size=(n, n))
        m = rng.random(size=(n, n)) < 0.4
        base, _ = jacobian_graph(CouplingSystem(couplings=c, linear_mask=m), 0.7)
        for _ in range(5):
            perm = rng.permutation(n)
            cp = c[np.ix_(perm, perm)]
            mp = m[np.ix_(perm, perm)]
            gp, _ = jacobian_graph(CouplingSystem(couplings=cp, linear_mask=mp), 0.7)
            # position a in the permuted system holds original variable perm[a]
            mapped = {
                tuple(sorted((int(perm[i]), int(perm[j])))) for i, j, _w in gp.edges
            }
            original = {(i, j) for i, j, _w in base.edges}
            assert mapped == original

    def test_shape_validation(self):
        with pytest.raises(DimensionMismatchError):
            CouplingSystem(couplings=np.zeros((2, 3)), linear_mask=np.zeros((2, 3), dtype=bool))
        with pytest.raises(DimensionMismatchError):
            CouplingSystem(couplings=np.zeros((3, 3)), linear_mask=np.zeros((2, 2), dtype=bool))

    def test_negative_threshold_rejected(self):
        sysm = CouplingSystem(couplings=np.zeros((2, 2)), linear_mask=np.zeros((2, 2), dtype=bool))
        with pytest.raises(ValueError):
            jacobian_graph(sysm, -0.5)
