"""Dense complex eigendecomposition and the spectral quantities built on it.

Eigenvalues are ordered by decreasing modulus, ties broken by decreasing real
part. Right eigenvectors have unit 2-norm and are gauge-fixed so that their
largest-magnitude entry is real and positive; left eigenvectors are scaled so
that ``w_i^H v_i = 1``. All comparisons against zero use tolerances relative
to ``||M||_inf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConvergenceFailure,
    CorankNotOne,
    DefectiveSpectrum,
    DimensionMismatch,
    DTooSmall,
    InputError,
    RankAmbiguous,
)

__all__ = [
    "SpectralDecomposition",
    "KernelPair",
    "KernelBasis",
    "PFKind",
    "PFClass",
    "eig",
    "spectral_abscissa",
    "corank",
    "translated_matrix",
    "default_shift",
    "pf_classify",
    "kernel_pair",
    "kernel_basis",
    "reduced_spectrum",
    "canonical_gauge",
    "inf_norm",
]

CLUSTER_TOL = 1e-7
ZERO_TOL = 1e-9
DOMINANCE_GAP = 1e-8
REAL_TOL = 1e-8
PF_ENTRY_TOL = 1e-9


def inf_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.abs(M).sum(axis=1).max())


def _scale(M) -> float:
    s = inf_norm(M)
    return s if s > 0 else 1.0


def _square(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def canonical_gauge(z):
    """Rotate ``z`` so its largest-magnitude entry is real positive."""
    z = np.asarray(z, dtype=complex)
    if not z.any():
        return z.copy()
    k = int(np.argmax(np.abs(z)))
    return z * (abs(z[k]) / z[k])


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with matched right (``V``) and left (``W``) eigenvector columns."""

    eigenvalues: np.ndarray
    V: np.ndarray
    W: np.ndarray
    normalized: bool
    diagonalizable: bool
    jordan_defect: int
    clusters: tuple

    @property
    def n(self):
        return len(self.eigenvalues)

    def residuals(self, M):
        """Largest right and left eigen-residuals ``(||Mv - lv||, ||w^H M - l w^H||)``."""
        M = np.asarray(M, dtype=complex)
        lam = self.eigenvalues
        r = np.linalg.norm(M @ self.V - self.V * lam, axis=0)
        l = np.linalg.norm(self.W.conj().T @ M - lam[:, None] * self.W.conj().T, axis=1)
        l = l / np.maximum(np.linalg.norm(self.W, axis=0), 1e-300)
        return float(r.max()), float(l.max())

    def to_dict(self):
        return {
            "eigenvalues": [_cplx(z) for z in self.eigenvalues],
            "normalized": self.normalized,
            "diagonalizable": self.diagonalizable,
            "jordan_defect": self.jordan_defect,
        }


def _cplx(z):
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def _cluster(lam, tol):
    n = len(lam)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(lam[i] - lam[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()))


def eig(M) -> SpectralDecomposition:
    """Full eigendecomposition of a general complex matrix.

    Backed by LAPACK's complex Schur reduction (``zgeev``). Eigenvalues closer
    than ``1e-7 ||M||`` are treated as one cluster; a cluster whose geometric
    multiplicity (numerical nullity of ``M - mu I``) falls short of its size
    marks the matrix as defective. Within semi-simple clusters the left basis
    is re-biorthogonalised against the right one.
    """
    M = _square(M)
    n = M.shape[0]
    try:
        lam, vl, vr = sla.eig(M, left=True, right=True, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed: {exc}") from None
    order = np.lexsort((-lam.real, -np.abs(lam)))
    lam, vl, vr = lam[order], vl[:, order], vr[:, order]

    scale = _scale(M)
    ctol = CLUSTER_TOL * scale
    clusters = _cluster(lam, ctol)

    V = np.empty_like(vr)
    for i in range(n):
        v = vr[:, i] / np.linalg.norm(vr[:, i])
        V[:, i] = canonical_gauge(v)
    W = vl / np.linalg.norm(vl, axis=0)

    defect = 0
    normalized = True
    for c in clusters:
        idx = list(c)
        k = len(idx)
        if k > 1:
            mu = lam[idx].mean()
            s = sla.svdvals(M - mu * np.eye(n))
            geo = int(np.sum(s <= ctol))
            if geo < k:
                defect += k - geo
                normalized = False
                continue
        G = W[:, idx].conj().T @ V[:, idx]
        if np.linalg.cond(G) > 1e12:
            normalized = False
            continue
        W[:, idx] = W[:, idx] @ np.linalg.inv(G).conj().T

    if normalized:
        d = np.einsum("ij,ij->j", W.conj(), V)
        normalized = bool(np.all(np.abs(d - 1) <= 1e-8))
    return SpectralDecomposition(
        eigenvalues=lam,
        V=V,
        W=W,
        normalized=normalized,
        diagonalizable=defect == 0,
        jordan_defect=int(defect),
        clusters=clusters,
    )


def spectral_abscissa(M) -> float:
    """Largest real part over the spectrum."""
    M = _square(M)
    return float(np.linalg.eigvals(M).real.max())


def corank(M, tol: float = ZERO_TOL) -> int:
    """Number of eigenvalues with ``|lambda| <= tol * ||M||_inf``.

    Cross-checked against the numerical nullity from an SVD at the same
    threshold. The two counts differ for a defective zero eigenvalue (algebraic
    vs geometric multiplicity) and then :class:`RankAmbiguous` is raised.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    M = _square(M)
    thr = tol * inf_norm(M)
    n_eig = int(np.sum(np.abs(np.linalg.eigvals(M)) <= thr))
    n_svd = int(np.sum(sla.svdvals(M) <= thr))
    if n_eig != n_svd:
        raise RankAmbiguous(
            f"eigenvalue count ({n_eig}) and SVD nullity ({n_svd}) disagree at threshold {thr:.3g}"
        )
    return n_eig


def default_shift(L) -> float:
    """Default ``d`` for ``B = dI - L``.

    Ten percent above the larger of the spectral radius and
    ``max |l|^2 / (2 Re l)`` over eigenvalues with positive real part; the
    second term is what makes ``d`` (the image of the zero eigenvalue) strictly
    dominant in modulus. Falls back to 1 for the zero matrix.
    """
    lam = np.linalg.eigvals(_square(L))
    rho = float(np.abs(lam).max())
    tol = ZERO_TOL * _scale(L)
    pos = lam[lam.real > tol]
    need = float((np.abs(pos) ** 2 / (2 * pos.real)).max()) if len(pos) else 0.0
    d = 1.1 * max(rho, need)
    return d if d > 0 else 1.0


def translated_matrix(L, d: float | None = None):
    """``(B, d)`` with ``B = d I - L``.

    A supplied ``d`` is accepted when it exceeds the spectral radius of ``L``
    or, failing that, when ``d`` is still the strictly dominant eigenvalue of
    ``B`` (``|d - l| < d`` for every nonzero eigenvalue ``l``).
    """
    L = _square(L)
    n = L.shape[0]
    if d is None:
        d = default_shift(L)
    else:
        d = float(d)
        lam = np.linalg.eigvals(L)
        rho = float(np.abs(lam).max())
        if not d > rho:
            tol = ZERO_TOL * _scale(L)
            nz = lam[np.abs(lam) > tol]
            if d <= 0 or np.any(np.abs(d - nz) >= d):
                raise DTooSmall(f"d={d} is not above the spectral radius {rho:.6g} "
                                "and does not make d a dominant eigenvalue")
    return d * np.eye(n) - L, d


class PFKind(str, Enum):
    NONE = "None"
    WEAK = "WeakPF"
    STRONG = "StrongPF"

    @property
    def rank(self):
        return {"None": 0, "WeakPF": 1, "StrongPF": 2}[self.value]


@dataclass(frozen=True)
class PFClass:
    """Perron-Frobenius class of ``M`` (``kind``) and of ``M^H`` (``adjoint_kind``)."""

    kind: PFKind
    adjoint_kind: PFKind
    dominant_eigenvalue: complex
    dominant_right: np.ndarray
    dominant_left: np.ndarray
    simple: bool
    strictly_dominant: bool

    @property
    def joint(self) -> PFKind:
        return min(self.kind, self.adjoint_kind, key=lambda k: k.rank)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "adjoint_kind": self.adjoint_kind.value,
            "joint": self.joint.value,
            "dominant_eigenvalue": _cplx(self.dominant_eigenvalue),
            "simple": self.simple,
            "strictly_dominant": self.strictly_dominant,
        }


def _vector_kind(z, spectral_ok, strict_ok):
    if not spectral_ok:
        return PFKind.NONE
    z = canonical_gauge(z)
    s = np.abs(z).max()
    re = z.real
    if strict_ok and np.all(re > PF_ENTRY_TOL * s):
        return PFKind.STRONG
    if np.all(re >= -PF_ENTRY_TOL * s):
        return PFKind.WEAK
    return PFKind.NONE


def pf_classify(M) -> PFClass:
    """Classify ``M`` and ``M^H`` into None / WeakPF / StrongPF.

    StrongPF: dominant eigenvalue real, positive, simple and strictly dominant
    in modulus, and ``Re(v) > 0`` entrywise in the canonical gauge. WeakPF
    keeps real, positive and simple but only asks ``Re(v) >= 0``. The adjoint
    shares the (real) dominant eigenvalue and has the left eigenvector ``w`` as
    its right eigenvector.
    """
    dec = eig(M)
    lam = dec.eigenvalues
    l1 = complex(lam[0])
    mod = abs(l1)
    is_real = abs(l1.imag) <= REAL_TOL * mod
    positive = l1.real > 0
    simple = len(next(c for c in dec.clusters if 0 in c)) == 1
    strict = len(lam) == 1 or (mod - abs(lam[1])) > DOMINANCE_GAP * mod
    ok = bool(is_real and positive and simple)
    v = dec.V[:, 0]
    w = dec.W[:, 0]
    return PFClass(
        kind=_vector_kind(v, ok, strict),
        adjoint_kind=_vector_kind(w, ok, strict),
        dominant_eigenvalue=l1,
        dominant_right=v,
        dominant_left=w,
        simple=bool(simple),
        strictly_dominant=bool(strict),
    )


@dataclass(frozen=True)
class KernelPair:
    """Right/left kernel eigenvectors with ``w^H v = 1``; ``alpha`` set when ``v = alpha * 1``."""

    v: np.ndarray
    w: np.ndarray
    alpha: complex | None

    def to_dict(self):
        return {
            "v": [_cplx(z) for z in self.v],
            "w": [_cplx(z) for z in self.w],
            "alpha": None if self.alpha is None else _cplx(self.alpha),
        }


def _zero_cluster(dec, M, k):
    thr = ZERO_TOL * inf_norm(M)
    order = np.argsort(np.abs(dec.eigenvalues), kind="stable")
    idx = sorted(int(i) for i in order[:k])
    if k and np.abs(dec.eigenvalues[idx]).max() > thr:
        raise RankAmbiguous("zero eigenvalues not resolved at the requested tolerance")
    return idx


def kernel_pair(L, tol: float = ZERO_TOL, decomposition: SpectralDecomposition | None = None) -> KernelPair:
    """Normalised kernel eigenvectors of a corank-1 matrix.

    ``v`` has unit norm with its largest entry real positive, so for a
    Laplacian ``v = 1/sqrt(n) * 1`` and ``alpha = 1/sqrt(n)``.
    """
    L = _square(L)
    c = corank(L, tol)
    if c != 1:
        raise CorankNotOne(f"corank is {c}, expected 1")
    dec = decomposition if decomposition is not None else eig(L)
    k = _zero_cluster(dec, L, 1)[0]
    v = dec.V[:, k]
    w = dec.W[:, k]
    w = w / np.conj(np.vdot(w, v))
    alpha = None
    if np.abs(v - v[0]).max() <= 1e-8 * abs(v[0]):
        alpha = complex(v.mean())
    return KernelPair(v=v, w=w, alpha=alpha)


@dataclass(frozen=True)
class KernelBasis:
    """Biorthonormal kernel bases (``W^H V = I``) and the spectral projector ``V W^H``."""

    V: np.ndarray
    W: np.ndarray
    representatives: tuple

    @property
    def projector(self):
        return self.V @ self.W.conj().T

    @property
    def dim(self):
        return self.V.shape[1]


def kernel_basis(L, representatives=None, tol: float = ZERO_TOL,
                 decomposition: SpectralDecomposition | None = None) -> KernelBasis:
    """Kernel bases of a matrix with a semi-simple zero eigenvalue.

    The spectral projector ``P`` onto the kernel does not depend on the basis.
    The right basis is taken as the columns of ``P`` at ``representatives``
    (one node per closed class; for single-node sinks this gives ``v_i`` with
    a 1 at sink ``i`` and ``w_i = e_i``), the left basis as its dual. Without
    representatives, columns are picked by pivoted QR.
    """
    L = _square(L)
    k = corank(L, tol)
    dec = decomposition if decomposition is not None else eig(L)
    if not dec.diagonalizable:
        raise DefectiveSpectrum(f"matrix is defective (Jordan defect {dec.jordan_defect})")
    idx = _zero_cluster(dec, L, k)
    V0, W0 = dec.V[:, idx], dec.W[:, idx]
    G = W0.conj().T @ V0
    W0 = W0 @ np.linalg.inv(G).conj().T
    P = V0 @ W0.conj().T
    if representatives is None or len(representatives) != k:
        _, _, piv = sla.qr(P, pivoting=True)
        representatives = sorted(int(i) for i in piv[:k])
    reps = list(representatives)
    C = W0.conj().T[:, reps]
    if np.linalg.cond(C) > 1e10:
        _, _, piv = sla.qr(P, pivoting=True)
        reps = sorted(int(i) for i in piv[:k])
        C = W0.conj().T[:, reps]
    V = V0 @ C
    W = W0 @ np.linalg.inv(C).conj().T
    return KernelBasis(V=V, W=W, representatives=tuple(reps))


def reduced_spectrum(L, tol: float = ZERO_TOL, decomposition: SpectralDecomposition | None = None):
    """Nonzero eigenvalues (the reduced Jordan block) and their indices in the decomposition."""
    L = _square(L)
    k = corank(L, tol)
    dec = decomposition if decomposition is not None else eig(L)
    zero = set(_zero_cluster(dec, L, k))
    keep = [i for i in range(dec.n) if i not in zero]
    return dec.eigenvalues[keep], keep
