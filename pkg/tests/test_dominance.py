import numpy as np
import pytest

from clx import fixtures
from clx.dominance import left_tan_condition, real_dominance, right_tan_condition
from clx.errors import IndeterminateRatio, NotAnEigenvector
from clx.spectral import eig, kernel_basis, kernel_pair, translated_matrix


class TestRealDominance:
    def test_stable_example_left_vector(self, lap):
        assert real_dominance(kernel_pair(lap("ex3")).w).real_dominant

    def test_positive_example_left_vector_fails(self, lap):
        rep = real_dominance(kernel_pair(lap("ex4")).w)
        assert not rep.real_dominant
        assert rep.violating_indices == (0, 2)
        np.testing.assert_allclose(rep.per_entry_phase, [-62.6, 3.4, -56.1], atol=0.1)

    def test_ones(self):
        assert real_dominance(np.ones(4), strict=True).strictly_real_dominant

    def test_zero_entry(self):
        rep = real_dominance([1, 0])
        assert rep.real_dominant and not rep.strictly_real_dominant

    def test_boundary(self):
        assert real_dominance([1 + 1j]).real_dominant
        assert not real_dominance([1 + 1j]).strictly_real_dominant


class TestLeftTan:
    def test_stable_example_open(self, lap):
        L = lap("ex3")
        B, _ = translated_matrix(L, 100)
        rep = left_tan_condition(B, kernel_pair(L).w)
        assert rep.all_in_open_unit
        assert rep.self_check_passed

    def test_positive_example_ratio(self, lap):
        L = lap("ex4")
        B, _ = translated_matrix(L)
        rep = left_tan_condition(B, kernel_pair(L).w)
        assert rep.ratios[0] == pytest.approx(np.tan(np.radians(62.655)), rel=1e-3)
        assert rep.ratios[0] == pytest.approx(1.93, abs=0.01)
        assert not rep.all_in_closed_unit

    def test_scalar_shift(self):
        rep = left_tan_condition(5 * np.eye(3), np.ones(3) / np.sqrt(3))
        np.testing.assert_allclose(rep.ratios, 0)

    def test_not_an_eigenvector(self, lap):
        B, _ = translated_matrix(lap("ex3"))
        with pytest.raises(NotAnEigenvector):
            left_tan_condition(B, np.array([1, 2, 3], dtype=complex))

    def test_zero_entries_flagged(self, lap):
        L = lap("ex6")
        B, _ = translated_matrix(L)
        rep = left_tan_condition(B, kernel_pair(L).w)
        assert rep.indeterminate == (1, 2, 3)
        assert rep.all_in_closed_unit and not rep.all_in_open_unit
        with pytest.raises(IndeterminateRatio):
            left_tan_condition(B, kernel_pair(L).w, on_indeterminate="raise")

    def test_identity_on_random_matrices(self, rng):
        checked = 0
        while checked < 40:
            n = int(rng.integers(2, 7))
            M = rng.uniform(0.1, 1, (n, n)) * np.exp(1j * rng.uniform(-0.6, 0.6, (n, n)))
            dec = eig(M)
            lam = dec.eigenvalues[0]
            # rotate so the dominant eigenvalue is real positive
            M = M * np.exp(-1j * np.angle(lam))
            dec = eig(M)
            w = dec.W[:, 0] * np.exp(1j * rng.uniform(0, 2 * np.pi))
            rep = left_tan_condition(M, w)
            assert rep.identity_max_error <= 1e-6
            checked += 1

    def test_gauge_covariance(self, lap, rng):
        L = lap("ex3")
        B, _ = translated_matrix(L)
        w = kernel_pair(L).w
        for gamma in rng.uniform(-np.pi, np.pi, 20):
            wg = w * np.exp(1j * gamma)
            rep = left_tan_condition(B, wg)
            assert rep.self_check_passed


class TestRightTan:
    def test_two_sink_kernel_vectors(self, lap):
        L = lap("ex7")
        kb = kernel_basis(L, representatives=(0, 2))
        for i in range(2):
            assert right_tan_condition(L, kb.V[:, i]).all_in_closed_unit

    def test_real_laplacian_ones(self):
        L = np.array([[1.0, -1.0, 0], [0, 2.0, -2.0], [-3.0, 0, 3.0]])
        rep = right_tan_condition(L, np.ones(3))
        np.testing.assert_allclose(rep.ratios, 0, atol=1e-12)

    def test_sixty_degree_entry(self):
        L0 = np.array([[1 + 0.5j, -1 - 0.5j], [-2 + 1j, 2 - 1j]])
        D = np.diag([1, np.exp(1j * np.pi / 3)])
        L = D @ L0 @ np.linalg.inv(D)
        rep = right_tan_condition(L, D @ np.ones(2))
        assert rep.ratios[1] == pytest.approx(np.sqrt(3), rel=1e-9)
        assert not rep.all_in_closed_unit
        assert rep.self_check_passed
        assert "B=dI-L" in rep.matrix_used
