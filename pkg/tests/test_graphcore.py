import json

import numpy as np
import pytest

from clx import fixtures
from clx.errors import DuplicateEdge, IndexOutOfBounds, InputError, ParseError, PhaseOutOfRange, SelfLoop
from clx.graphcore import (
    ComplexDigraph,
    ComplexWeight,
    build_digraph,
    digraph_from_matrix,
    graph_from_dict,
    graph_to_dict,
    is_irreducible,
    laplacian,
    load_graph,
    structural_connectivity,
    walk_sum,
)

from .conftest import random_digraph_matrix


def W(z):
    return ComplexWeight.from_complex(z)


class TestComplexWeight:
    def test_polar_89_degrees(self):
        w = ComplexWeight.from_polar(1.0, 89.0)
        assert w.re == pytest.approx(0.0174524, abs=1e-6)
        assert w.im == pytest.approx(0.9998477, abs=1e-6)
        assert w.is_admissible_edge()

    def test_views_agree(self):
        w = ComplexWeight(3.0, -4.0)
        assert w.magnitude == pytest.approx(5.0)
        back = ComplexWeight.from_polar(w.magnitude, w.phase_deg)
        assert back.re == pytest.approx(3.0, rel=1e-12)
        assert back.im == pytest.approx(-4.0, rel=1e-12)

    @pytest.mark.parametrize("z", [1j, -1 + 0.1j, 0, -2])
    def test_inadmissible_edge_phases(self, z):
        assert not W(z).is_admissible_edge()


class TestBuild:
    def test_walk_example_adjacency(self):
        g = fixtures.graph("ex2")
        expected = np.array([[0, 0, 1 + 1j], [1 + 2j, 0, 1 - 3j], [0, 0, 0]])
        np.testing.assert_array_equal(g.A, expected)

    def test_single_node(self):
        g = build_digraph([], 1)
        assert g.n == 1
        np.testing.assert_array_equal(g.A, [[0]])

    @pytest.mark.parametrize("edges,err", [
        ([(0, 0, W(1))], SelfLoop),
        ([(0, 1, W(1)), (0, 1, W(2))], DuplicateEdge),
        ([(0, 3, W(1))], IndexOutOfBounds),
        ([(0, 1, W(1j))], PhaseOutOfRange),
        ([(0, 1, W(-1 + 1j))], PhaseOutOfRange),
    ])
    def test_rejections(self, edges, err):
        with pytest.raises(err):
            build_digraph(edges, 3)

    def test_adjacency_is_read_only(self):
        g = fixtures.graph("ex3")
        with pytest.raises(ValueError):
            g.A[0, 1] = 1.0

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(SelfLoop):
            ComplexDigraph(np.eye(2, dtype=complex))


class TestLaplacian:
    def test_stable_example_row(self, lap):
        np.testing.assert_allclose(lap("ex3")[0], [30 + 10j, 0, -30 - 10j])

    def test_zero_edges(self):
        L = laplacian(build_digraph([], 3)).L
        np.testing.assert_array_equal(L, np.zeros((3, 3)))

    def test_unit_cycle(self):
        g = build_digraph([(0, 1, W(1 + 1j)), (1, 2, W(1 + 1j)), (2, 0, W(1 + 1j))], 3)
        L = laplacian(g).L
        np.testing.assert_allclose(np.diag(L), [1 + 1j] * 3)
        assert all(np.sum(np.isclose(row, -1 - 1j)) == 1 for row in L)

    def test_row_sums_vanish(self, rng):
        for n in range(1, 9):
            A = random_digraph_matrix(rng, n)
            L = laplacian(digraph_from_matrix(A)).L
            assert np.abs(L.sum(axis=1)).max() <= 1e-12 * max(1, np.abs(L).sum(axis=1).max())


class TestConnectivity:
    def test_single_sink_tree(self):
        rep = structural_connectivity(fixtures.graph("ex6"))
        assert rep.globally_reachable == (0,)
        assert rep.weakly_connected and not rep.strongly_connected

    def test_two_sinks(self):
        rep = structural_connectivity(fixtures.graph("ex7"))
        assert rep.sinks == (0, 2)
        assert rep.n_sinks == 2
        assert rep.globally_reachable == ()

    def test_complete_pair(self):
        g = build_digraph([(0, 1, W(1)), (1, 0, W(1))], 2)
        rep = structural_connectivity(g)
        assert rep.strongly_connected
        assert rep.n_sinks == 0
        assert rep.globally_reachable == (0, 1)

    def test_walk_example_third_node_reachable(self):
        rep = structural_connectivity(fixtures.graph("ex2"))
        assert rep.globally_reachable == (2,)
        assert rep.sinks == (2,)

    def test_agrees_with_irreducibility(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            A = random_digraph_matrix(rng, n, density=rng.uniform(0.1, 0.6))
            assert structural_connectivity(A).strongly_connected == is_irreducible(A)


class TestWalkSum:
    def test_cancellation_in_walk_example(self):
        ws = walk_sum(fixtures.graph("ex2"))
        assert ws.S[0, 2] == pytest.approx(1 + 1j)
        assert ws.S[1, 2] == 0
        assert not ws.column_all_nonzero[2]
        assert not ws.all_nonzero

    def test_zero_matrix(self):
        ws = walk_sum(np.zeros((2, 2)))
        np.testing.assert_array_equal(ws.S, np.eye(2))

    def test_unit_cycle_all_nonzero(self):
        g = build_digraph([(0, 1, W(1)), (1, 2, W(1)), (2, 0, W(1))], 3)
        assert walk_sum(g).all_nonzero

    def test_needs_two_nodes(self):
        with pytest.raises(InputError):
            walk_sum(build_digraph([], 1))

    def test_sufficient_direction_only(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            A = random_digraph_matrix(rng, n, density=rng.uniform(0.2, 0.8))
            if walk_sum(A).all_nonzero:
                assert structural_connectivity(A).strongly_connected


class TestIrreducible:
    def test_cycle(self, lap):
        assert is_irreducible(-lap("ex3"))

    def test_upper_triangular(self):
        assert not is_irreducible(np.triu(np.ones((3, 3)), 1))

    def test_walk_example(self):
        assert not is_irreducible(fixtures.graph("ex2").A)


class TestJson:
    def test_round_trip(self):
        g = fixtures.graph("ex7")
        h = graph_from_dict(json.loads(json.dumps(graph_to_dict(g))))
        np.testing.assert_array_equal(g.A, h.A)

    def test_polar_edges(self):
        g = graph_from_dict({"n": 2, "edges": [{"src": 0, "dst": 1, "r": 2.0, "beta_deg": 30.0}]})
        assert g.A[0, 1] == pytest.approx(2 * np.exp(1j * np.pi / 6))

    @pytest.mark.parametrize("obj", [{}, {"n": "3", "edges": []}, {"n": 2, "edges": [{"src": 0}]}, []])
    def test_malformed(self, obj):
        with pytest.raises(ParseError):
            graph_from_dict(obj)

    def test_bundled_files_match_fixtures(self):
        for name in fixtures.names():
            g = load_graph(fixtures.data_path(f"{name}.json"))
            np.testing.assert_array_equal(g.A, fixtures.graph(name).A)

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(ParseError):
            load_graph(p)
