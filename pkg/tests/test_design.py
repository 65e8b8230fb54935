import numpy as np
import pytest

from clx import fixtures
from clx.certify import ConsensusKind, consensus_verdict
from clx.design import (
    consensus_pipeline,
    default_targets,
    design_modified_flow,
    match_spectrum,
    modified_matrix,
    stabilizing_diagonal,
)
from clx.errors import (
    CorankNotOne,
    DimensionMismatch,
    DuplicateTargets,
    InputError,
    NoGloballyReachableNode,
    ZeroEigenvalueInJReduced,
)
from clx.graphcore import digraph_from_matrix
from clx.schema import validate
from clx.spectral import kernel_pair, reduced_spectrum

from .conftest import laplacian_from, random_digraph_matrix

EX8_EIGS = [1107.7 + 1321j, -597.5 + 1618.3j]


class TestStabilizingDiagonal:
    def test_printed_diagonal(self):
        S = stabilizing_diagonal(EX8_EIGS, [1408, 1219])
        np.testing.assert_allclose(S, [0.524 - 0.625j, -0.245 - 0.663j], atol=1e-2)

    def test_already_positive(self):
        np.testing.assert_allclose(stabilizing_diagonal([2, 3], [2, 3]), [1, 1])

    def test_rotation(self):
        np.testing.assert_allclose(stabilizing_diagonal([1j], [1]), [-1j])

    def test_round_trip(self, rng):
        lam = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        t = rng.uniform(1, 10, 5)
        S = stabilizing_diagonal(lam, t)
        assert np.all(np.abs(S * lam - t) <= 1e-9 * t)

    def test_default_targets_distinct(self):
        t = default_targets([3 + 4j, 5, -5j])
        assert len(set(np.round(t, 9))) == 3
        assert t.min() == pytest.approx(5)

    def test_errors(self):
        with pytest.raises(ZeroEigenvalueInJReduced):
            stabilizing_diagonal([1, 0])
        with pytest.raises(DuplicateTargets):
            stabilizing_diagonal([1, 2j], [3, 3])
        with pytest.raises(InputError):
            stabilizing_diagonal([1, 2j], [3, -1])
        with pytest.raises(DimensionMismatch):
            stabilizing_diagonal([1, 2j], [3])


class TestModifiedMatrix:
    def test_printed_design(self, lap):
        L = lap("ex8")
        S = stabilizing_diagonal(EX8_EIGS, [1408, 1219])
        d = modified_matrix(L, S, eigenvalues=EX8_EIGS)
        printed = np.array([878.7 - 36.8j, -438.2 + 53.31j, -440.5 - 16.5j])
        assert np.abs(d.L_m[0] - printed).max() <= 0.01 * np.abs(printed).max()
        err, _ = match_spectrum(d.spectrum_achieved, [0, 1219, 1408])
        assert err < 1.0
        np.testing.assert_allclose(d.L_m.sum(axis=1), 0, atol=1e-9 * np.abs(d.L_m).max())

    def test_modified_left_vector(self, lap):
        L = lap("ex8")
        d = modified_matrix(L, stabilizing_diagonal(EX8_EIGS, [1408, 1219]), eigenvalues=EX8_EIGS)
        w = kernel_pair(d.L_m).w
        w = w * np.exp(-1j * np.angle(w[0]))
        np.testing.assert_allclose(w, [0.58, 0.57 + 0.046j, 0.56 + 0.096j], atol=2e-2)

    def test_identity_reassignment(self, lap):
        L = lap("ex3")
        d = modified_matrix(L, np.ones(2))
        np.testing.assert_allclose(d.L_m, L, atol=1e-8 * np.abs(L).max())

    def test_kernel_and_spectrum(self, rng):
        done = 0
        while done < 30:
            L = laplacian_from(random_digraph_matrix(rng, int(rng.integers(2, 7)), strongly_connected=True))
            try:
                lam, _ = reduced_spectrum(L)
                t = rng.uniform(1, 20, lam.size)
                d = modified_matrix(L, stabilizing_diagonal(lam, t))
            except (CorankNotOne, DuplicateTargets):
                continue
            done += 1
            norm = np.abs(d.L_m).sum(axis=1).max()
            assert np.abs(d.L_m @ np.ones(L.shape[0])).max() <= 1e-9 * norm
            w = kernel_pair(L).w
            assert np.abs(w.conj() @ d.L_m).max() <= 1e-6 * norm * np.abs(w).max()
            err, _ = match_spectrum(d.spectrum_achieved, np.concatenate([[0], t]))
            assert err <= 1e-6 * t.max()
            assert consensus_verdict(d.L_m).kind is ConsensusKind.CONSENSUS

    def test_corank_two(self, lap):
        with pytest.raises(CorankNotOne):
            modified_matrix(lap("ex7"), np.ones(3))

    def test_wrong_size(self, lap):
        with pytest.raises(DimensionMismatch):
            modified_matrix(lap("ex3"), np.ones(3))

    def test_json(self, lap):
        validate("design", design_modified_flow(lap("ex8")).to_dict())


class TestPipeline:
    def test_original_branch(self):
        res = consensus_pipeline(fixtures.graph("ex3"))
        assert res.branch == "original" and res.design is None
        assert res.consensus_reached

    def test_modified_branch(self):
        res = consensus_pipeline(fixtures.graph("ex8"), targets=[1219, 1408], t_end=0.05)
        assert res.branch == "modified"
        assert res.trajectory.consensus_error[-1] < 1e-6
        assert res.verdict_original.kind is ConsensusKind.DIVERGENT
        assert res.verdict_final.kind is ConsensusKind.CONSENSUS
        np.testing.assert_allclose(res.trajectory.final_state, res.steady_state, atol=1e-6)

    def test_default_targets_reach_consensus(self):
        res = consensus_pipeline(fixtures.graph("ex8"))
        assert res.consensus_reached

    def test_single_node(self):
        res = consensus_pipeline(fixtures.graph("trivial"))
        assert res.branch == "original" and res.consensus_reached

    def test_no_globally_reachable_node(self):
        with pytest.raises(NoGloballyReachableNode):
            consensus_pipeline(fixtures.graph("ex7"))

    def test_idempotent_on_consensual_graph(self, rng):
        for _ in range(20):
            A = random_digraph_matrix(rng, 5, max_phase=20, strongly_connected=True)
            res = consensus_pipeline(digraph_from_matrix(A))
            if res.verdict_original.kind is ConsensusKind.CONSENSUS and res.branch == "original":
                np.testing.assert_allclose(res.steady_state, res.trajectory.final_state, atol=1e-6)
                assert res.design is None

    def test_seed_determinism(self):
        a = consensus_pipeline(fixtures.graph("eies"), seed=5).to_dict()
        b = consensus_pipeline(fixtures.graph("eies"), seed=5).to_dict()
        assert a == b

    def test_json(self):
        validate("pipeline", consensus_pipeline(fixtures.graph("ex8")).to_dict())
