import numpy as np
import pytest

from clx import fixtures
from clx.diffusion import influence_vector, is_hermitian, is_weight_balanced, random_walk_laplacian
from clx.errors import CorankNotOne, ZeroDegreeNode
from clx.flows import matrix_exponential
from clx.graphcore import ComplexWeight, build_digraph, digraph_from_matrix, laplacian
from clx.schema import validate


class TestBalance:
    def test_cycle(self):
        assert is_weight_balanced(fixtures.graph("ex9"))

    def test_unbalanced(self):
        assert not is_weight_balanced(fixtures.graph("ex3"))

    def test_empty(self):
        assert is_weight_balanced(build_digraph([], 3))


class TestRandomWalk:
    def test_cycle_matrix(self):
        rw = random_walk_laplacian(fixtures.graph("ex9"))
        expected = np.array([[1, 0, -1], [-1, 1, 0], [0, -1, 1]])
        np.testing.assert_allclose(rw.matrix, expected, atol=1e-12, rtol=0)
        assert rw.is_real

    def test_single_edge_rows(self):
        A = np.array([[0, 2 + 1j, 0], [0, 0, 3 - 1j], [1 + 1j, 0, 0]])
        rw = random_walk_laplacian(A)
        P = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        np.testing.assert_allclose(rw.matrix, np.eye(3) - P, atol=1e-15)

    def test_hermitian_is_measured(self, rng):
        B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        A = np.abs(B.real) + 1j * B.imag
        A = A + A.conj().T
        np.fill_diagonal(A, 0)
        assert is_hermitian(A)
        rw = random_walk_laplacian(A)
        assert rw.is_real == (rw.imag_max <= 1e-9)
        assert rw.imag_max > 1e-9

    def test_zero_degree(self):
        with pytest.raises(ZeroDegreeNode):
            random_walk_laplacian(fixtures.graph("ex6"))


class TestInfluence:
    def test_uniform_on_cycle(self):
        infl = influence_vector(fixtures.laplacian_of("ex9"))
        np.testing.assert_allclose(infl.values, 1 / 3, atol=1e-9)
        assert not infl.advisory
        assert infl.most_influential == 0

    def test_single_node(self):
        np.testing.assert_allclose(influence_vector(np.zeros((1, 1))).values, [1])

    def test_star_into_sink(self):
        g = build_digraph([(i, 0, ComplexWeight(1.0, 0.3 * i)) for i in (1, 2, 3)], 4)
        infl = influence_vector(g)
        np.testing.assert_allclose(infl.values, [1, 0, 0, 0], atol=1e-9)
        assert infl.most_influential == 0
        assert infl.advisory
        L = laplacian(g).L
        p = matrix_exponential(-L.T, 50.0) @ (np.ones(4) / 4)
        assert int(np.argmax(p.real)) == infl.most_influential

    def test_corank_two(self):
        with pytest.raises(CorankNotOne):
            influence_vector(fixtures.laplacian_of("ex7"))

    def test_balanced_sum_is_one(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            perm = rng.permutation(n)
            w = rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(-1, 1))
            A = np.zeros((n, n), dtype=complex)
            for a, b in zip(perm, np.roll(perm, -1)):
                A[a, b] = w
            g = digraph_from_matrix(A)
            assert is_weight_balanced(g)
            infl = influence_vector(g)
            assert infl.values.sum() == pytest.approx(1, abs=1e-9)

    def test_json(self):
        validate("influence", influence_vector(fixtures.laplacian_of("ex9")).to_dict())
