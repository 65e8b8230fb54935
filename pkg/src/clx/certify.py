"""Eventual positivity certificates and the consensus verdict.

Two routes lead to a certificate:

* **Theorem**: the spectral and dominance hypotheses (corank, marginal
  stability, real dominance of the kernel eigenvectors, tan conditions on
  ``B = dI - L`` and the Perron-Frobenius class of ``B`` and ``B^H``) are
  checked and recorded one by one.
* **Empirical**: the sign pattern of ``Re exp(-L t)`` is sampled on a time
  grid. This is evidence, not proof; the reported ``t0`` is a grid estimate.

A refutation always carries a concrete counterexample: either a structural
zero (no directed path ``i -> j``, so ``exp(-L t)[i, j] = 0`` for every ``t``)
or a sampled entry with strictly negative real part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .dominance import left_tan_condition, real_dominance, right_tan_condition
from .errors import (
    DefectiveSpectrum,
    DivergentFlow,
    EmptyGrid,
    InputError,
    Overflow,
)
from .flows import matrix_exponential
from .graphcore import structural_connectivity
from .spectral import (
    ZERO_TOL,
    corank,
    eig,
    inf_norm,
    kernel_basis,
    kernel_pair,
    pf_classify,
    translated_matrix,
)

__all__ = [
    "Property",
    "Verdict",
    "Route",
    "ConsensusKind",
    "Hypothesis",
    "Certificate",
    "SignPatternResult",
    "ConsensusVerdict",
    "empirical_sign_pattern",
    "certify_rEEP",
    "certify_rEENN",
    "consensus_verdict",
    "predict_steady_state",
    "default_time_grid",
]

STAB_TOL = 1e-9
TOL_POS = 1e-12
TOL_ZERO = 1e-9
REFUTATION_TOL = 1e-9
GRID_POINTS = 64


class Property(str, Enum):
    REEP = "rEEP"
    REENN = "rEENN"


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


class Route(str, Enum):
    THEOREM = "Theorem"
    EMPIRICAL = "Empirical"
    BOTH = "Both"


class ConsensusKind(str, Enum):
    CONSENSUS = "Consensus"
    DIVERGENT = "Divergent"
    MULTISINK = "MultiSink"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Certificate:
    property: Property
    verdict: Verdict
    route: Route
    hypotheses: tuple
    witnesses: dict = field(default_factory=dict)

    def hypothesis(self, name) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def to_dict(self):
        return {
            "property": self.property.value,
            "verdict": self.verdict.value,
            "route": self.route.value,
            "witnesses": _jsonable(self.witnesses),
            "hypotheses": [h.to_dict() for h in self.hypotheses],
        }


@dataclass(frozen=True)
class SignPatternResult:
    """Outcome of sampling ``Re exp(-L t)`` on a grid.

    ``holds`` is true when the last sampled time satisfies the sign test;
    ``t0_estimate`` is the earliest grid time from which every later sample
    passes. ``counterexample`` describes the worst entry at the last time when
    the test fails there.
    """

    mode: str
    holds: bool
    t0_estimate: float | None
    sampled_times: np.ndarray
    passed: np.ndarray
    counterexample: dict | None

    def to_dict(self):
        return {
            "mode": self.mode,
            "holds": self.holds,
            "t0_estimate": self.t0_estimate,
            "sampled_times": [float(t) for t in self.sampled_times],
            "counterexample": self.counterexample,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _as_matrix(L):
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] < 1:
        raise InputError(f"expected a nonempty square matrix, got shape {L.shape}")
    if not np.all(np.isfinite(L)):
        raise InputError("matrix has non-finite entries")
    return L


class _Spectrum:
    """Shared spectral facts with one tolerance scale (``1e-9 ||L||_inf``)."""

    def __init__(self, L):
        self.L = L
        self.n = L.shape[0]
        self.dec = eig(L)
        if not self.dec.diagonalizable:
            raise DefectiveSpectrum(f"Laplacian is defective (Jordan defect {self.dec.jordan_defect})")
        norm = inf_norm(L)
        self.tol = STAB_TOL * norm
        lam = self.dec.eigenvalues
        self.zero = np.abs(lam) <= ZERO_TOL * norm
        self.corank = corank(L) if norm > 0 else self.n
        self.nonzero = lam[~self.zero]
        self.abscissa_neg = float((-lam).real.max())
        self.stable_nonzero = bool(np.all(self.nonzero.real > self.tol))
        self.marginal = bool(self.abscissa_neg <= self.tol and self.stable_nonzero)
        self.gap = float(self.nonzero.real.min()) if self.nonzero.size else None


def _marginal_hypothesis(sp):
    detail = (f"spectral abscissa of -L = {sp.abscissa_neg:.6g}; "
              f"min Re of nonzero eigenvalues of L = {sp.gap if sp.gap is None else round(sp.gap, 9)}")
    return Hypothesis("marginally_stable", sp.marginal, detail)


def default_time_grid(L, points: int = GRID_POINTS) -> np.ndarray:
    """Log-spaced times over ``[1e-3, 10] / gap``, gap = smallest positive Re(lambda(L))."""
    L = _as_matrix(L)
    lam = np.linalg.eigvals(L)
    tol = STAB_TOL * inf_norm(L)
    pos = lam.real[lam.real > tol]
    gap = float(pos.min()) if pos.size else 1.0
    return np.logspace(np.log10(1e-3 / gap), np.log10(10.0 / gap), points)


def empirical_sign_pattern(L, t_grid=None, mode: str = "strict",
                           tol_pos: float = TOL_POS, tol_zero: float = TOL_ZERO) -> SignPatternResult:
    """Sample the sign pattern of ``Re exp(-L t)``.

    ``mode="strict"`` tests ``Re > tol_pos``; ``mode="nonneg"`` tests
    ``Re >= -tol_zero * ||exp(-L t)||_inf``.

    Raises
    ------
    Overflow
        If ``-L`` has an eigenvalue with positive real part.
    EmptyGrid
        If the supplied grid is empty.
    """
    L = _as_matrix(L)
    if mode not in ("strict", "nonneg"):
        raise InputError(f"mode must be 'strict' or 'nonneg', got {mode!r}")
    lam = np.linalg.eigvals(L)
    if (-lam).real.max() > STAB_TOL * inf_norm(L):
        raise Overflow("-L has an unstable mode; sampled exponentials grow without bound")
    if t_grid is None:
        t_grid = default_time_grid(L)
    t_grid = np.asarray(t_grid, dtype=float).ravel()
    if t_grid.size == 0:
        raise EmptyGrid("time grid is empty")
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise InputError("time grid must be positive and strictly increasing")

    ok = np.empty(t_grid.size, dtype=bool)
    last = None
    for k, t in enumerate(t_grid):
        E = matrix_exponential(-L, t)
        R = E.real
        if mode == "strict":
            bad = R <= tol_pos
        else:
            bad = R < -tol_zero * inf_norm(E)
        ok[k] = not bad.any()
        last = R
    # earliest index from which every later sample passes
    t0 = None
    if ok[-1]:
        k = len(ok) - 1
        while k > 0 and ok[k - 1]:
            k -= 1
        t0 = float(t_grid[k])
    cex = None
    if not ok[-1]:
        i, j = np.unravel_index(np.argmin(last), last.shape)
        cex = {"kind": "sampled_entry", "t": float(t_grid[-1]), "i": int(i), "j": int(j),
               "re_value": float(last[i, j])}
    return SignPatternResult(mode=mode, holds=bool(ok[-1]), t0_estimate=t0, sampled_times=t_grid,
                             passed=ok, counterexample=cex)


def _structural_zero(L):
    """A pair ``(i, j)`` with no directed path ``i -> j`` in the support, or None."""
    S = np.abs(L) > 0
    np.fill_diagonal(S, False)
    G = csr_matrix(S.astype(np.int8))
    n = L.shape[0]
    for i in range(n):
        reached = set(breadth_first_order(G, i, directed=True, return_predecessors=False).tolist())
        for j in range(n):
            if j not in reached:
                return int(i), int(j)
    return None


def _negative_entry_search(L, sp, limit=None):
    """Look for ``Re exp(-L t)[i, j] < 0`` at late sample times.

    For unstable flows the grid spans ``[5, 20] / sigma`` with ``sigma`` the
    growth rate, so entries stay finite. For stable flows with a limit matrix
    the search evaluates ``t = 50 / gap``.
    """
    if sp.abscissa_neg > sp.tol:
        sigma = sp.abscissa_neg
        times = np.linspace(5.0 / sigma, 20.0 / sigma, 61)
        settle = 5.0 / sigma
    elif sp.gap is not None:
        times = np.array([50.0 / sp.gap])
        settle = 10.0 / sp.gap
    else:
        return None
    best = None
    for t in times[::-1]:
        try:
            E = matrix_exponential(-L, t)
        except Overflow:
            continue
        R = E.real
        i, j = np.unravel_index(np.argmin(R), R.shape)
        if R[i, j] < -REFUTATION_TOL * inf_norm(E):
            best = {"kind": "negative_entry", "t": float(t), "i": int(i), "j": int(j),
                    "re_value": float(R[i, j]), "settling_bound": float(settle)}
            break
    return best


def _kernel_hypotheses(sp, strict):
    """Theorem-route checks on the kernel pair of a corank-1 Laplacian."""
    L = sp.L
    hyps, wit = [], {}
    kp = kernel_pair(L, decomposition=sp.dec)
    B, d = translated_matrix(L)
    wit["d"] = d
    wit["kernel_pair"] = kp.to_dict()
    if kp.alpha is None:
        hyps.append(Hypothesis("v_in_span_ones", False, "right kernel eigenvector is not constant"))
        return hyps, wit, False
    alpha_rep = real_dominance([kp.alpha], strict=strict)
    name = "alpha_strictly_real_dominant" if strict else "alpha_real_dominant"
    ok_alpha = alpha_rep.strictly_real_dominant if strict else alpha_rep.real_dominant
    hyps.append(Hypothesis(name, ok_alpha, f"alpha = {complex(kp.alpha):.6g}"))
    tan = left_tan_condition(B, kp.w)
    wit["left_tan"] = tan.to_dict()
    wit["w_dominance"] = real_dominance(kp.w, strict=strict).to_dict()
    ok_tan = tan.all_in_open_unit if strict else tan.all_in_closed_unit
    interval = "(-1, 1)" if strict else "[-1, 1]"
    hyps.append(Hypothesis("left_tan_condition", ok_tan,
                           f"ratios {np.round(tan.ratios, 6).tolist()} in {interval}; "
                           f"self-check {'ok' if tan.self_check_passed else 'FAILED'}"))
    pf = pf_classify(B)
    wit["pf_B"] = pf.to_dict()
    if strict:
        ok_pf = pf.kind.value == "StrongPF" and pf.adjoint_kind.value == "StrongPF"
        hyps.append(Hypothesis("B_and_BH_strong_PF", ok_pf, f"B: {pf.kind.value}, B^H: {pf.adjoint_kind.value}"))
    else:
        ok_pf = pf.joint.value in ("WeakPF", "StrongPF")
        hyps.append(Hypothesis("B_and_BH_PF", ok_pf, f"B: {pf.kind.value}, B^H: {pf.adjoint_kind.value}"))
    return hyps, wit, bool(ok_alpha and ok_tan and ok_pf)


def certify_rEEP(L, tol_pos: float = TOL_POS) -> Certificate:
    """Decide whether ``-L`` is real eventually exponentially positive.

    Theorem route: corank 1, marginal stability, ``v = alpha 1`` with ``alpha``
    strictly real dominant, left tan ratios in the open interval and ``B``,
    ``B^H`` strongly Perron-Frobenius. If the spectral part holds but a
    dominance hypothesis fails, the empirical route decides. A support digraph
    that is not strongly connected refutes outright (structural zeros).
    """
    L = _as_matrix(L)
    sp = _Spectrum(L)
    conn = structural_connectivity(L)
    hyps = [Hypothesis("strongly_connected", conn.strongly_connected or sp.n == 1,
                       f"{conn.scc_count} strongly connected component(s)"),
            Hypothesis("corank_one", sp.corank == 1, f"corank = {sp.corank}"),
            _marginal_hypothesis(sp)]
    wit = {"corank": sp.corank}

    pair = _structural_zero(L) if sp.n > 1 else None
    if pair is not None:
        wit["counterexample"] = {"kind": "structural_zero", "i": pair[0], "j": pair[1]}
        return Certificate(Property.REEP, Verdict.REFUTED, Route.THEOREM, tuple(hyps), wit)

    if not (sp.corank == 1 and sp.marginal):
        cex = _negative_entry_search(L, sp)
        if cex is not None:
            wit["counterexample"] = cex
            return Certificate(Property.REEP, Verdict.REFUTED, Route.EMPIRICAL, tuple(hyps), wit)
        return Certificate(Property.REEP, Verdict.INCONCLUSIVE, Route.EMPIRICAL, tuple(hyps), wit)

    khyps, kwit, ok = _kernel_hypotheses(sp, strict=True)
    hyps += khyps
    wit.update(kwit)
    if ok:
        return Certificate(Property.REEP, Verdict.CERTIFIED, Route.THEOREM, tuple(hyps), wit)
    return _empirical_fallback(L, sp, Property.REEP, "strict", hyps, wit, tol_pos=tol_pos)


def _empirical_fallback(L, sp, prop, mode, hyps, wit, **tols):
    res = empirical_sign_pattern(L, mode=mode, **tols)
    wit["t0_estimate"] = res.t0_estimate
    wit["sampled_times"] = res.sampled_times
    if res.holds:
        return Certificate(prop, Verdict.CERTIFIED, Route.EMPIRICAL, tuple(hyps), wit)
    cex = _negative_entry_search(L, sp)
    if cex is not None:
        wit["counterexample"] = cex
        return Certificate(prop, Verdict.REFUTED, Route.EMPIRICAL, tuple(hyps), wit)
    wit["grid_counterexample"] = res.counterexample
    return Certificate(prop, Verdict.INCONCLUSIVE, Route.EMPIRICAL, tuple(hyps), wit)


def _sinks(L):
    return structural_connectivity(L).sinks if L.shape[0] > 1 else ()


def certify_rEENN(L, tol_zero: float = TOL_ZERO) -> Certificate:
    """Decide whether ``-L`` is real eventually exponentially nonnegative.

    Corank 1: marginal stability plus the closed-interval dominance hypotheses.
    Corank ``k >= 2``: ``k`` must equal the sink count, the zero eigenvalue
    must be semi-simple, every kernel basis pair must meet the closed tan
    conditions and the limit ``sum_i v_i w_i^H`` must have nonnegative real
    part. Anything else goes to the empirical route.
    """
    L = _as_matrix(L)
    sp = _Spectrum(L)
    hyps = [Hypothesis("zero_semisimple", True, f"corank = {sp.corank}"), _marginal_hypothesis(sp)]
    wit = {"corank": sp.corank}

    if not sp.marginal:
        cex = _negative_entry_search(L, sp)
        if cex is not None:
            wit["counterexample"] = cex
            return Certificate(Property.REENN, Verdict.REFUTED, Route.EMPIRICAL, tuple(hyps), wit)
        return Certificate(Property.REENN, Verdict.INCONCLUSIVE, Route.EMPIRICAL, tuple(hyps), wit)

    if sp.corank == 1:
        khyps, kwit, ok = _kernel_hypotheses(sp, strict=False)
        hyps += khyps
        wit.update(kwit)
        if ok:
            return Certificate(Property.REENN, Verdict.CERTIFIED, Route.THEOREM, tuple(hyps), wit)
        return _empirical_fallback(L, sp, Property.REENN, "nonneg", hyps, wit, tol_zero=tol_zero)

    sinks = _sinks(L)
    wit["sinks"] = list(sinks)
    hyps.append(Hypothesis("corank_equals_sink_count", len(sinks) == sp.corank,
                           f"corank {sp.corank}, sinks {list(sinks)}"))
    ok = len(sinks) == sp.corank
    if ok:
        kb = kernel_basis(L, representatives=sinks, decomposition=sp.dec)
        _, d = translated_matrix(L)
        B = d * np.eye(sp.n) - L
        wit["d"] = d
        left_ok = right_ok = True
        tans = []
        for i in range(kb.dim):
            lt = left_tan_condition(B, kb.W[:, i])
            rt = right_tan_condition(L, kb.V[:, i], d=d)
            left_ok &= lt.all_in_closed_unit
            right_ok &= rt.all_in_closed_unit
            tans.append({"left": lt.to_dict(), "right": rt.to_dict()})
        wit["kernel_tan"] = tans
        P = kb.projector
        scale = max(1.0, float(np.abs(P).max()))
        lim_ok = bool(P.real.min() >= -TOL_ZERO * scale)
        wit["limit_min_real"] = float(P.real.min())
        hyps += [Hypothesis("left_tan_condition_all", bool(left_ok), "closed interval on each w_i"),
                 Hypothesis("right_tan_condition_all", bool(right_ok), "closed interval on each v_i"),
                 Hypothesis("limit_real_nonnegative", lim_ok, f"min Re(sum v_i w_i^H) = {P.real.min():.3g}")]
        ok = bool(left_ok and right_ok and lim_ok)
    if ok:
        return Certificate(Property.REENN, Verdict.CERTIFIED, Route.THEOREM, tuple(hyps), wit)
    return _empirical_fallback(L, sp, Property.REENN, "nonneg", hyps, wit, tol_zero=tol_zero)


@dataclass(frozen=True)
class ConsensusVerdict:
    """Spectral consensus verdict with the steady-state map.

    ``projector`` is ``lim exp(-L t)`` whenever that limit exists; for
    ``Consensus`` it equals ``alpha * 1 w^H``.
    """

    kind: ConsensusKind
    corank: int
    j_reduced_spectrum: np.ndarray
    alpha: complex | None
    w: np.ndarray | None
    projector: np.ndarray | None
    gap: float | None
    reasons: tuple

    def to_dict(self):
        out = {
            "kind": self.kind.value,
            "corank": self.corank,
            "j_reduced_spectrum": _jsonable(self.j_reduced_spectrum),
            "gap": self.gap,
            "reasons": [r.to_dict() for r in self.reasons],
        }
        if self.alpha is not None:
            out["steady_functional"] = {"alpha": _jsonable(self.alpha), "w": _jsonable(self.w)}
        elif self.projector is not None:
            out["steady_functional"] = {"projector": _jsonable(self.projector)}
        else:
            out["steady_functional"] = None
        return out


def consensus_verdict(L) -> ConsensusVerdict:
    """Consensus iff corank 1 and every nonzero eigenvalue of ``L`` has ``Re > 0``.

    Dominance conditions are attached as advisory reasons only; they are
    sufficient-side hypotheses and do not enter the decision.
    """
    L = _as_matrix(L)
    if np.abs(L.sum(axis=1)).max() > 1e-9 * max(1.0, inf_norm(L)):
        raise InputError("rows of L do not sum to zero")
    sp = _Spectrum(L)
    reasons = [Hypothesis("corank_one", sp.corank == 1, f"corank = {sp.corank}"),
               Hypothesis("nonzero_spectrum_in_ORHP", sp.stable_nonzero,
                          f"min Re = {sp.gap}" if sp.gap is not None else "no nonzero eigenvalues")]
    jred = sp.nonzero
    if sp.corank == 1:
        kp = kernel_pair(L, decomposition=sp.dec)
        vd = real_dominance([kp.alpha] if kp.alpha is not None else kp.v)
        wd = real_dominance(kp.w)
        reasons.append(Hypothesis("advisory_v_real_dominant", vd.real_dominant))
        reasons.append(Hypothesis("advisory_w_real_dominant", wd.real_dominant,
                                  f"phases {np.round(wd.per_entry_phase, 3).tolist()}"))
        if sp.stable_nonzero:
            P = np.outer(kp.v, kp.w.conj())
            return ConsensusVerdict(ConsensusKind.CONSENSUS, 1, jred, kp.alpha, kp.w, P, sp.gap, tuple(reasons))
        return ConsensusVerdict(ConsensusKind.DIVERGENT, 1, jred, None, None, None, sp.gap, tuple(reasons))
    if not sp.stable_nonzero:
        return ConsensusVerdict(ConsensusKind.DIVERGENT, sp.corank, jred, None, None, None, sp.gap, tuple(reasons))
    sinks = _sinks(L)
    reasons.append(Hypothesis("corank_equals_sink_count", len(sinks) == sp.corank,
                              f"sinks {list(sinks)}"))
    kb = kernel_basis(L, representatives=sinks if len(sinks) == sp.corank else None, decomposition=sp.dec)
    return ConsensusVerdict(ConsensusKind.MULTISINK, sp.corank, jred, None, None, kb.projector, sp.gap,
                            tuple(reasons))


def predict_steady_state(L, x0, verdict: ConsensusVerdict | None = None) -> np.ndarray:
    """``lim x(t)``: ``1 (alpha w^H x0)`` for consensus, ``(sum v_i w_i^H) x0`` for multiple sinks."""
    x0 = np.asarray(x0, dtype=complex).ravel()
    v = verdict if verdict is not None else consensus_verdict(L)
    if v.kind is ConsensusKind.DIVERGENT:
        raise DivergentFlow("flow has no finite limit for generic initial states")
    if x0.size != v.projector.shape[0]:
        raise InputError("x0 has the wrong length")
    if v.kind is ConsensusKind.CONSENSUS:
        return np.full(x0.size, v.alpha * np.vdot(v.w, x0))
    return v.projector @ x0
