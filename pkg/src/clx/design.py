"""Modified flows: re-place the nonzero spectrum while keeping both kernel eigenvectors.

With ``L = V ([0] + J) W^H`` (biorthonormal ``V``, ``W``), a diagonal ``S``
with ``S_ii = target_i / lambda_i`` moves every nonzero eigenvalue to a
positive real target:

    L_m = V ([0] + S J) W^H.

``L_m`` has the same kernel pair as ``L`` (so ``L_m 1 = 0``), but its
off-diagonal entries need not be valid negated edge weights any more.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .certify import ConsensusKind, ConsensusVerdict, consensus_verdict, predict_steady_state
from .dominance import real_dominance
from .errors import (
    CorankNotOne,
    DefectiveSpectrum,
    DimensionMismatch,
    DuplicateTargets,
    InputError,
    NoGloballyReachableNode,
    ZeroEigenvalueInJReduced,
)
from .flows import Trajectory, draw_initial_state, simulate
from .graphcore import ComplexDigraph, laplacian, structural_connectivity
from .spectral import corank, eig, inf_norm, kernel_pair, reduced_spectrum

__all__ = [
    "ModifiedFlowDesign",
    "PipelineResult",
    "default_targets",
    "stabilizing_diagonal",
    "modified_matrix",
    "design_modified_flow",
    "consensus_pipeline",
    "match_spectrum",
]

ZERO_EIG_TOL = 1e-9
SPACING = 1e-3
LAPLACIAN_TOL = 1e-9


def _cplx_list(z):
    return [{"re": float(c.real), "im": float(c.imag)} for c in np.ravel(z)]


def default_targets(eigs) -> np.ndarray:
    """``|lambda_i|`` per eigenvalue, nudged apart by ``1e-3 max|lambda|`` where they collide."""
    mags = np.abs(np.asarray(eigs, dtype=complex))
    eps = SPACING * mags.max()
    out = mags.copy()
    order = np.argsort(mags, kind="stable")
    for a, b in zip(order[:-1], order[1:]):
        if out[b] - out[a] < eps:
            out[b] = out[a] + eps
    return out


def stabilizing_diagonal(eigs, targets=None) -> np.ndarray:
    """Diagonal of ``S`` with ``S_ii lambda_i = target_i``.

    Parameters
    ----------
    eigs : sequence of complex
        Nonzero eigenvalues to move, in the order the diagonal should follow.
    targets : sequence of float, optional
        Distinct positive reals paired position-wise with ``eigs``. Defaults to
        :func:`default_targets`.

    Returns
    -------
    (k,) complex ndarray
    """
    lam = np.atleast_1d(np.asarray(eigs, dtype=complex))
    if lam.size == 0:
        raise InputError("no eigenvalues to stabilize")
    mags = np.abs(lam)
    if np.any(mags <= ZERO_EIG_TOL * mags.max()) or mags.max() == 0:
        raise ZeroEigenvalueInJReduced("reduced spectrum contains a zero eigenvalue")
    if targets is None:
        t = default_targets(lam)
    else:
        t = np.atleast_1d(np.asarray(targets, dtype=float))
        if t.size != lam.size:
            raise DimensionMismatch(f"{t.size} targets for {lam.size} eigenvalues")
        if np.any(~np.isfinite(t)) or np.any(t <= 0):
            raise InputError("targets must be finite positive reals")
        ts = np.sort(t)
        if np.any(np.diff(ts) <= 1e-12 * ts.max()):
            raise DuplicateTargets("targets must be distinct")
    return t / lam


def match_spectrum(achieved, wanted):
    """Optimal one-to-one matching; returns ``(max_abs_error, permutation)``."""
    a = np.asarray(achieved, dtype=complex)
    b = np.asarray(wanted, dtype=complex)
    if a.size != b.size:
        raise DimensionMismatch("spectra have different sizes")
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if a.size else 0.0, c


@dataclass(frozen=True)
class ModifiedFlowDesign:
    S: np.ndarray
    targets: np.ndarray
    eigenvalues: np.ndarray
    L_m: np.ndarray
    is_laplacian: bool
    spectrum_achieved: np.ndarray
    spectrum_error: float
    kernel_residual_right: float
    kernel_residual_left: float

    def to_dict(self):
        return {
            "targets": [float(t) for t in self.targets],
            "S": _cplx_list(self.S),
            "L_m": [_cplx_list(row) for row in self.L_m],
            "is_laplacian": self.is_laplacian,
            "spectrum_achieved": _cplx_list(self.spectrum_achieved),
        }


def _implied_edges_valid(L_m):
    A = -L_m.copy()
    np.fill_diagonal(A, 0)
    nz = np.abs(A) > LAPLACIAN_TOL * max(inf_norm(L_m), 1e-300)
    return bool(np.all(A[nz].real > 0))


def modified_matrix(L, S, eigenvalues=None) -> ModifiedFlowDesign:
    """Build ``L_m = V ([0] + S J_reduced) W^H``.

    ``S`` is the diagonal (vector or matrix) aligned with the reduced spectrum
    order of :func:`clx.spectral.reduced_spectrum`. When ``eigenvalues`` is
    given, ``S`` is taken to be aligned with that list instead and is permuted
    onto the reduced spectrum by nearest matching.
    """
    L = np.asarray(L, dtype=complex)
    S = np.asarray(S, dtype=complex)
    if S.ndim == 2:
        S = np.diag(S)
    n = L.shape[0]
    if corank(L) != 1:
        raise CorankNotOne(f"corank is {corank(L)}, expected 1")
    dec = eig(L)
    if not dec.diagonalizable:
        raise DefectiveSpectrum("modified flows need a diagonalisable Laplacian")
    lam, keep = reduced_spectrum(L, decomposition=dec)
    if S.size != n - 1:
        raise DimensionMismatch(f"S has {S.size} entries, expected {n - 1}")
    if eigenvalues is not None:
        given = np.asarray(eigenvalues, dtype=complex)
        if given.size != lam.size:
            raise DimensionMismatch("eigenvalue list does not match the reduced spectrum")
        cost = np.abs(lam[:, None] - given[None, :])
        _, col = linear_sum_assignment(cost)
        S = S[col]
    zero = [i for i in range(n) if i not in keep][0]
    diag = np.zeros(n, dtype=complex)
    diag[keep] = S * lam
    diag[zero] = 0.0
    L_m = (dec.V * diag) @ dec.W.conj().T

    kp = kernel_pair(L, decomposition=dec)
    norm = max(inf_norm(L_m), 1e-300)
    res_r = float(np.abs(L_m @ kp.v).max() / (norm * np.abs(kp.v).max()))
    res_l = float(np.abs(kp.w.conj() @ L_m).max() / (norm * np.abs(kp.w).max()))
    achieved = np.linalg.eigvals(L_m)
    achieved = achieved[np.lexsort((-achieved.real, -np.abs(achieved)))]
    targets = (S * lam).real
    err, _ = match_spectrum(achieved, np.concatenate([[0.0], S * lam]))
    return ModifiedFlowDesign(
        S=S, targets=targets, eigenvalues=lam, L_m=L_m,
        is_laplacian=_implied_edges_valid(L_m), spectrum_achieved=achieved, spectrum_error=err,
        kernel_residual_right=res_r, kernel_residual_left=res_l,
    )


def design_modified_flow(L, targets=None) -> ModifiedFlowDesign:
    """Stabilizing diagonal and modified Laplacian in one step (targets in reduced-spectrum order)."""
    lam, _ = reduced_spectrum(L)
    return modified_matrix(L, stabilizing_diagonal(lam, targets))


@dataclass(frozen=True)
class PipelineResult:
    """End-to-end consensus run.

    ``branch`` is ``"original"`` when the flow under ``L`` already meets the
    consensus conditions and ``"modified"`` when ``L_m`` was designed and
    simulated instead.
    """

    branch: str
    verdict_original: Optional[ConsensusVerdict]
    verdict_final: Optional[ConsensusVerdict]
    design: Optional[ModifiedFlowDesign]
    trajectory: Trajectory
    x0: np.ndarray
    steady_state: np.ndarray
    reasons: tuple = field(default_factory=tuple)

    @property
    def consensus_reached(self) -> bool:
        return self.trajectory.consensus_error[-1] <= 1e-6 * max(1.0, np.abs(self.x0).max())

    def to_dict(self):
        return {
            "branch": self.branch,
            "reasons": list(self.reasons),
            "verdict_original": None if self.verdict_original is None else self.verdict_original.to_dict(),
            "verdict_final": None if self.verdict_final is None else self.verdict_final.to_dict(),
            "design": None if self.design is None else self.design.to_dict(),
            "x0": _cplx_list(self.x0),
            "steady_state": _cplx_list(self.steady_state),
            "trajectory": self.trajectory.summary(),
            "consensus_reached": bool(self.consensus_reached),
        }


def consensus_pipeline(g: ComplexDigraph, x0=None, targets=None, t_end: float | None = None,
                       num_samples: int = 201, method="exp", seed: int = 42) -> PipelineResult:
    """Decide, and if needed enforce, consensus on ``g``.

    The original flow is kept when its kernel eigenvectors are real dominant
    and every nonzero eigenvalue of ``L`` has positive real part; otherwise a
    modified Laplacian is designed (``targets`` default to ``|lambda|``) and
    simulated. ``t_end`` defaults to ``20 / gap`` of the simulated matrix.
    """
    n = g.n
    if n == 1:
        x = np.atleast_1d(np.asarray(x0 if x0 is not None else draw_initial_state(1, seed=seed), dtype=complex))
        traj = simulate(np.zeros((1, 1)), x, t_end or 1.0, num_samples, method)
        return PipelineResult("original", None, None, None, traj, x, x.copy(),
                              ("single node: trivially in consensus",))
    conn = structural_connectivity(g)
    if not conn.globally_reachable:
        raise NoGloballyReachableNode("the digraph has no globally reachable node")
    L = laplacian(g).L
    verdict = consensus_verdict(L)
    reasons = []
    keep = verdict.kind is ConsensusKind.CONSENSUS
    if keep:
        kp = kernel_pair(L)
        v_ok = real_dominance([kp.alpha]).real_dominant if kp.alpha is not None else False
        w_ok = real_dominance(kp.w).real_dominant
        keep = v_ok and w_ok
        if not keep:
            reasons.append("kernel eigenvectors are not real dominant")
    else:
        reasons.append(f"original verdict is {verdict.kind.value}")

    if keep:
        M, design, final = L, None, verdict
        reasons.append("original flow meets the consensus conditions")
    else:
        lam, _ = reduced_spectrum(L)
        design = modified_matrix(L, stabilizing_diagonal(lam, targets))
        M = design.L_m
        final = consensus_verdict(M)
    w = kernel_pair(M).w
    x = draw_initial_state(n, w, seed) if x0 is None else np.asarray(x0, dtype=complex).ravel()
    if t_end is None:
        gap = final.gap if final.gap else 1.0
        t_end = 20.0 / gap
    traj = simulate(M, x, t_end, num_samples, method)
    steady = predict_steady_state(M, x, final)
    return PipelineResult("original" if design is None else "modified", verdict, final, design,
                          traj, x, steady, tuple(reasons))
