"""Graph construction, matrix views, subgraphs, quotients, components."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spectral_abstraction as sa
from spectral_abstraction.errors import (
    DuplicateEdgeError,
    EmptySubsetError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    NonpositiveWeightError,
    PartitionMismatchError,
    SelfLoopError,
)

from conftest import random_connected_graph
from oracles import union_find_components


class TestConstruction:
    def test_triangle(self, triangle):
        assert triangle.n == 3
        assert triangle.n_edges == 3
        assert triangle.edges == ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0))

    def test_edges_are_canonicalized(self):
        g = sa.graph_from_edges(["a", "b", "c"], [(2, 1, 1.5), (1, 0, 0.5)])
        assert g.edges == ((0, 1, 0.5), (1, 2, 1.5))

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError) as err:
            sa.graph_from_edges(["a", "b"], [(0, 0, 1.0)])
        assert "(0, 0" in str(err.value)

    def test_duplicate_pair_rejected_either_orientation(self):
        with pytest.raises(DuplicateEdgeError):
            sa.graph_from_edges(["a", "b"], [(0, 1, 1.0), (1, 0, 2.0)])

    def test_nonpositive_weights_rejected(self):
        for w in (0.0, -1.0):
            with pytest.raises(NonpositiveWeightError):
                sa.graph_from_edges(["a", "b"], [(0, 1, w)])

    def test_nonfinite_weight_rejected(self):
        with pytest.raises(NonpositiveWeightError):
            sa.graph_from_edges(["a", "b"], [(0, 1, float("nan"))])

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            sa.graph_from_edges(["a", "b"], [(0, 2, 1.0)])

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            sa.graph_from_edges(["a", "a"], [(0, 1, 1.0)])

    def test_error_names_offending_edge(self):
        with pytest.raises(NonpositiveWeightError) as err:
            sa.graph_from_edges(["a", "b", "c"], [(0, 1, 1.0), (1, 2, -2.0)])
        assert "(1, 2" in str(err.value)


class TestMatrices:
    def test_triangle_adjacency(self, triangle):
        A = sa.adjacency_matrix(triangle)
        assert np.array_equal(A, np.ones((3, 3)) - np.eye(3))

    def test_edgeless_adjacency(self):
        g = sa.graph_from_edges(["a", "b", "c"], [])
        assert np.array_equal(sa.adjacency_matrix(g), np.zeros((3, 3)))

    def test_p3_adjacency(self, p3):
        A = sa.adjacency_matrix(p3)
        expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
        assert np.array_equal(A, expected)

    def test_c4_is_2_regular(self, c4):
        assert np.array_equal(sa.degrees(c4), np.full(4, 2.0))

    def test_degree_matrix_is_adjacency_row_sums(self, bridged_triangles):
        A = sa.adjacency_matrix(bridged_triangles)
        D = sa.degree_matrix(bridged_triangles)
        assert np.array_equal(np.diag(D), A.sum(axis=1))
        assert np.array_equal(D, np.diag(np.diag(D)))

    def test_p3_combinatorial_laplacian(self, p3):
        L = sa.laplacian(p3, sa.LaplacianKind.COMBINATORIAL)
        expected = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]], dtype=float)
        assert np.array_equal(np.asarray(L.matrix), expected)

    def test_triangle_combinatorial_laplacian(self, triangle):
        L = np.asarray(sa.laplacian(triangle, sa.LaplacianKind.COMBINATORIAL).matrix)
        assert np.array_equal(L, 3 * np.eye(3) - np.ones((3, 3)))

    def test_laplacian_is_degree_minus_adjacency_entrywise(self, bridged_triangles):
        L = np.asarray(sa.laplacian(bridged_triangles, sa.LaplacianKind.COMBINATORIAL).matrix)
        D = sa.degree_matrix(bridged_triangles)
        A = sa.adjacency_matrix(bridged_triangles)
        assert np.array_equal(L, D - A)

    def test_normalized_laplacian_unit_diagonal(self, bridged_triangles):
        L = np.asarray(sa.laplacian(bridged_triangles, sa.LaplacianKind.NORMALIZED).matrix)
        assert np.allclose(np.diag(L), 1.0)
        assert np.allclose(L, L.T)

    def test_normalized_laplacian_isolated_node_row_is_zero(self):
        g = sa.graph_from_edges(["a", "b", "c"], [(0, 1, 2.0)])
        L = np.asarray(sa.laplacian(g, sa.LaplacianKind.NORMALIZED).matrix)
        assert np.array_equal(L[2], np.zeros(3))
        assert np.array_equal(L[:, 2], np.zeros(3))
        assert L[2, 2] == 0.0


@given(seed=st.integers(0, 10**6), n=st.integers(2, 16))
@settings(max_examples=60, deadline=None)
def test_combinatorial_row_sums_vanish(seed, n):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n)
    L = np.asarray(sa.laplacian(g, sa.LaplacianKind.COMBINATORIAL).matrix)
    assert np.abs(L.sum(axis=1)).max() < 1e-12
    off = L - np.diag(np.diag(L))
    assert off.max() <= 0.0


class TestInducedSubgraph:
    def test_triangle_edge(self, triangle):
        sub = sa.induced_subgraph(triangle, [0, 2])
        assert sub.labels == ("a", "c")
        assert sub.edges == ((0, 1, 1.0),)

    def test_node_order_is_sorted(self, bridged_triangles):
        sub = sa.induced_subgraph(bridged_triangles, [5, 3, 4])
        assert sub.labels == ("w0", "w1", "w2")
        assert sub.n_edges == 3

    def test_empty_subset_rejected(self, triangle):
        with pytest.raises(EmptySubsetError):
            sa.induced_subgraph(triangle, [])

    def test_bad_index_rejected(self, triangle):
        with pytest.raises(IndexOutOfRangeError):
            sa.induced_subgraph(triangle, [0, 3])

    def test_duplicate_indices_collapse(self, triangle):
        assert sa.induced_subgraph(triangle, [0, 0, 2]).labels == ("a", "c")


class TestQuotient:
    def test_bridged_triangles_collapse_to_single_edge(self, bridged_triangles):
        p = sa.Partition(assignment=(0, 0, 0, 1, 1, 1), k=2)
        q = sa.quotient_graph(bridged_triangles, p)
        assert q.labels == ("c0", "c1")
        assert q.edges == ((0, 1, 1.0),)

    def test_crossing_weights_are_summed(self, c4):
        p = sa.Partition(assignment=(0, 1, 0, 1), k=2)
        q = sa.quotient_graph(c4, p)
        assert q.edges == ((0, 1, 4.0),)

    def test_identity_partition_keeps_no_edges(self, triangle):
        p = sa.Partition(assignment=(0, 0, 0), k=1)
        q = sa.quotient_graph(triangle, p)
        assert q.n == 1
        assert q.n_edges == 0

    def test_size_mismatch_rejected(self, triangle):
        with pytest.raises(PartitionMismatchError):
            sa.quotient_graph(triangle, sa.Partition(assignment=(0, 1), k=2))


@given(seed=st.integers(0, 10**6), n=st.integers(3, 14), k=st.integers(2, 4))
@settings(max_examples=50, deadline=None)
def test_quotient_conserves_crossing_weight(seed, n, k):
    """Quotient weight plus intra-cluster weight equals total weight."""
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n)
    k = min(k, n)
    labels = rng.integers(0, k, size=n)
    labels[:k] = np.arange(k)
    remap = {int(a): t for t, a in enumerate(dict.fromkeys(int(x) for x in labels))}
    assignment = tuple(remap[int(a)] for a in labels)
    p = sa.Partition(assignment=assignment, k=len(remap))
    q = sa.quotient_graph(g, p)
    intra = sum(w for i, j, w in g.edges if assignment[i] == assignment[j])
    assert q.total_weight + intra == pytest.approx(g.total_weight, abs=1e-12)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 18), p=st.floats(0.0, 0.7))
@settings(max_examples=80, deadline=None)
def test_components_match_union_find(seed, n, p):
    rng = np.random.default_rng(seed)
    edges = [
        (i, j, 1.0) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    g = sa.graph_from_edges([f"n{i}" for i in range(n)], edges)
    ours = [set(c) for c in sa.connected_components(g)]
    theirs = union_find_components(n, edges)
    assert ours == theirs


def test_components_are_ordered_by_minimum_index(two_k3):
    comps = sa.connected_components(two_k3)
    assert comps == [[0, 1, 2], [3, 4, 5]]


class TestSbmGenerate:
    def test_deterministic(self):
        a = sa.sbm_generate(3, 4, 0.8, 0.1, seed=11)
        b = sa.sbm_generate(3, 4, 0.8, 0.1, seed=11)
        assert a.edges == b.edges
        assert a.labels == b.labels

    def test_labels_carry_block_and_offset(self):
        g = sa.sbm_generate(2, 3, 1.0, 0.0, seed=0)
        assert g.labels == ("b0n0", "b0n1", "b0n2", "b1n0", "b1n1", "b1n2")

    def test_extreme_probabilities_plant_disjoint_cliques(self):
        g = sa.sbm_generate(2, 4, 1.0, 0.0, seed=0)
        comps = sa.connected_components(g)
        assert comps == [[0, 1, 2, 3], [4, 5, 6, 7]]
        assert g.n_edges == 12

    def test_equal_probabilities_allowed(self):
        g = sa.sbm_generate(2, 3, 0.5, 0.5, seed=2)
        assert g.n == 6

    def test_probability_ordering_enforced(self):
        with pytest.raises(InvalidProbabilityError):
            sa.sbm_generate(2, 3, 0.2, 0.5, seed=0)

    def test_probability_range_enforced(self):
        with pytest.raises(InvalidProbabilityError):
            sa.sbm_generate(2, 3, 1.2, 0.1, seed=0)
        with pytest.raises(InvalidProbabilityError):
            sa.sbm_generate(2, 3, 0.8, -0.1, seed=0)

    def test_shape_preconditions(self):
        with pytest.raises(ValueError):
            sa.sbm_generate(1, 4, 0.8, 0.1, seed=0)
        with pytest.raises(ValueError):
            sa.sbm_generate(2, 1, 0.8, 0.1, seed=0)

    def test_seed_changes_draws(self):
        a = sa.sbm_generate(3, 5, 0.7, 0.1, seed=1)
        b = sa.sbm_generate(3, 5, 0.7, 0.1, seed=2)
        assert a.edges != b.edges
