"""Random-walk Laplacian and the influence vector.

The influence vector ``I = (1^T / n) v w^H`` is the steady-state diffusion
mass per node. Its probabilistic reading needs a weight-balanced or Hermitian
digraph; outside that class the vector is still computed but flagged as
advisory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroDegreeNode
from .graphcore import ComplexDigraph
from .spectral import kernel_pair

__all__ = [
    "RandomWalkLaplacian",
    "InfluenceVector",
    "is_weight_balanced",
    "is_hermitian",
    "random_walk_laplacian",
    "influence_vector",
]

BALANCE_TOL = 1e-9
REAL_TOL = 1e-9


def _adjacency(g):
    if isinstance(g, ComplexDigraph):
        return np.asarray(g.A, dtype=complex)
    return np.asarray(g, dtype=complex)


def _offdiag_adjacency(L):
    A = -np.asarray(L, dtype=complex).copy()
    np.fill_diagonal(A, 0)
    return A


def is_weight_balanced(g) -> bool:
    """True iff the complex out-degree equals the in-degree at every node."""
    A = _adjacency(g)
    scale = np.abs(A).sum(axis=1).max() if A.size else 0.0
    return bool(np.abs(A.sum(axis=1) - A.sum(axis=0)).max(initial=0.0) <= BALANCE_TOL * scale)


def is_hermitian(g) -> bool:
    A = _adjacency(g)
    scale = np.abs(A).max(initial=0.0)
    return bool(np.abs(A - A.conj().T).max(initial=0.0) <= BALANCE_TOL * scale)


@dataclass(frozen=True)
class RandomWalkLaplacian:
    matrix: np.ndarray
    is_real: bool
    imag_max: float


def random_walk_laplacian(g) -> RandomWalkLaplacian:
    """``I - D_out^{-1} A``, with a measured (not assumed) realness flag."""
    A = _adjacency(g)
    deg = A.sum(axis=1)
    scale = np.abs(A).sum(axis=1)
    zero = np.abs(deg) <= 1e-12 * np.maximum(scale, 1e-300)
    if np.any(zero):
        raise ZeroDegreeNode(f"nodes {np.flatnonzero(zero).tolist()} have zero out-degree")
    M = np.eye(A.shape[0]) - A / deg[:, None]
    imag = float(np.abs(M.imag).max())
    return RandomWalkLaplacian(matrix=M, is_real=imag <= REAL_TOL, imag_max=imag)


@dataclass(frozen=True)
class InfluenceVector:
    values: np.ndarray
    most_influential: int
    imag_residual: float
    advisory: bool

    def to_dict(self):
        return {
            "values": [float(x) for x in self.values],
            "imag_residual": self.imag_residual,
            "advisory": self.advisory,
            "most_influential": self.most_influential,
        }


def influence_vector(L) -> InfluenceVector:
    """``(1^T / n) v w^H`` for a corank-1 Laplacian (or random-walk Laplacian).

    ``advisory`` is set when the implied adjacency is neither weight balanced
    nor Hermitian, or when the result has a non-negligible imaginary part.
    Ties in ``most_influential`` go to the lowest index.
    """
    if isinstance(L, ComplexDigraph):
        from .graphcore import laplacian

        L = laplacian(L).L
    L = np.asarray(L, dtype=complex)
    n = L.shape[0]
    kp = kernel_pair(L)
    infl = (kp.v.sum() / n) * kp.w.conj()
    vals = infl.real
    imag = float(np.abs(infl.imag).max())
    A = _offdiag_adjacency(L)
    gate = is_weight_balanced(A) or is_hermitian(A)
    top = vals.max()
    best = int(np.flatnonzero(vals >= top - 1e-12 * max(1.0, abs(top)))[0])
    return InfluenceVector(values=vals, most_influential=best, imag_residual=imag,
                           advisory=bool(not gate or imag > REAL_TOL))
