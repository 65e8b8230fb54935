"""Complex-weighted digraphs, their Laplacians and structural connectivity.

Edges point from row to column: ``A[i, j]`` is the weight of the edge
``i -> j``, so rows hold outgoing edges and the out-degree matrix is
``diag(A @ 1)``. Connectivity is always evaluated on the support digraph
(``|a_ij| > 0``); power sums of ``A`` can cancel and are only used as a
one-sided test.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DimensionMismatch,
    DuplicateEdge,
    IndexOutOfBounds,
    InputError,
    ParseError,
    PhaseOutOfRange,
    SelfLoop,
)

__all__ = [
    "ComplexWeight",
    "ComplexDigraph",
    "Laplacian",
    "ConnectivityReport",
    "WalkSum",
    "build_digraph",
    "digraph_from_matrix",
    "digraph_from_laplacian",
    "laplacian",
    "structural_connectivity",
    "walk_sum",
    "is_irreducible",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph",
]


@dataclass(frozen=True)
class ComplexWeight:
    """Edge weight ``re + 1j*im``; polar view via :attr:`magnitude` / :attr:`phase_deg`."""

    re: float
    im: float

    @classmethod
    def from_polar(cls, r, beta_deg):
        if r < 0:
            raise InputError(f"magnitude must be nonnegative, got {r}")
        b = math.radians(beta_deg)
        return cls(r * math.cos(b), r * math.sin(b))

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def phase_deg(self) -> float:
        return math.degrees(math.atan2(self.im, self.re))

    def is_admissible_edge(self) -> bool:
        """True when the phase lies strictly inside (-90, 90) degrees."""
        return self.magnitude > 0 and abs(self.phase_deg) < 90.0


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ComplexDigraph:
    """Node count, complex adjacency matrix and optional node labels."""

    A: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        A = np.asarray(self.A)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise DimensionMismatch(f"adjacency must be a nonempty square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise InputError("adjacency has non-finite entries")
        if np.any(np.diag(A) != 0):
            raise SelfLoop("adjacency diagonal must be zero")
        object.__setattr__(self, "A", _readonly(A))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != A.shape[0]:
                raise DimensionMismatch(f"{len(labels)} labels for {A.shape[0]} nodes")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def support(self) -> np.ndarray:
        """Boolean adjacency of the support digraph."""
        return np.abs(self.A) > 0

    def edges(self):
        """List of ``(src, dst, ComplexWeight)`` in row-major order."""
        src, dst = np.nonzero(self.support())
        return [(int(i), int(j), ComplexWeight.from_complex(self.A[i, j])) for i, j in zip(src, dst)]


@dataclass(frozen=True)
class Laplacian:
    L: np.ndarray
    D_out: np.ndarray
    D_in: np.ndarray

    @property
    def n(self) -> int:
        return self.L.shape[0]


@dataclass(frozen=True)
class ConnectivityReport:
    strongly_connected: bool
    weakly_connected: bool
    sinks: tuple
    sources: tuple
    globally_reachable: tuple
    scc_count: int
    scc_labels: tuple = field(repr=False, default=())

    @property
    def n_sinks(self) -> int:
        return len(self.sinks)

    def to_dict(self):
        return {
            "strongly_connected": self.strongly_connected,
            "weakly_connected": self.weakly_connected,
            "sinks": list(self.sinks),
            "sources": list(self.sources),
            "globally_reachable": list(self.globally_reachable),
            "scc_count": self.scc_count,
        }


@dataclass(frozen=True)
class WalkSum:
    """``S = sum_{k<n} A^k`` with sufficient-only connectivity flags.

    A zero entry in ``S`` does *not* mean the corresponding walk is missing:
    complex weights along different walks can cancel.
    """

    S: np.ndarray
    all_nonzero: bool
    column_all_nonzero: tuple
    threshold: float


def build_digraph(edges: Iterable, n: int, labels: Sequence[str] | None = None) -> ComplexDigraph:
    """Build a digraph from ``(src, dst, weight)`` triples.

    ``weight`` may be a :class:`ComplexWeight` or anything ``complex()``
    accepts. Every edge must have phase strictly inside (-90, 90) degrees.

    Raises
    ------
    IndexOutOfBounds, SelfLoop, DuplicateEdge, PhaseOutOfRange
    """
    n = int(n)
    if n < 1:
        raise InputError(f"node count must be >= 1, got {n}")
    A = np.zeros((n, n), dtype=complex)
    seen = set()
    for src, dst, weight in edges:
        src, dst = int(src), int(dst)
        if not (0 <= src < n and 0 <= dst < n):
            raise IndexOutOfBounds(f"edge ({src}, {dst}) outside 0..{n - 1}")
        if src == dst:
            raise SelfLoop(f"self-loop at node {src}")
        if (src, dst) in seen:
            raise DuplicateEdge(f"duplicate edge ({src}, {dst})")
        w = weight if isinstance(weight, ComplexWeight) else ComplexWeight.from_complex(weight)
        if not (math.isfinite(w.re) and math.isfinite(w.im)):
            raise InputError(f"edge ({src}, {dst}) has a non-finite weight")
        if not w.is_admissible_edge():
            raise PhaseOutOfRange(
                f"edge ({src}, {dst}) weight {w.value} has phase {w.phase_deg:.6g} deg, "
                "outside (-90, 90)"
            )
        seen.add((src, dst))
        A[src, dst] = w.value
    return ComplexDigraph(A, labels)


def digraph_from_matrix(A, labels=None, check_phases=True) -> ComplexDigraph:
    """Wrap an adjacency matrix, validating edge phases like :func:`build_digraph`."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"adjacency must be square, got shape {A.shape}")
    if check_phases:
        src, dst = np.nonzero(np.abs(A) > 0)
        edges = [(i, j, A[i, j]) for i, j in zip(src, dst)]
        return build_digraph(edges, A.shape[0], labels)
    return ComplexDigraph(A, labels)


def digraph_from_laplacian(L, labels=None) -> ComplexDigraph:
    """Recover ``A = D_out - L`` off the diagonal; requires zero row sums."""
    L = np.asarray(L, dtype=complex)
    A = -L.copy()
    np.fill_diagonal(A, 0)
    scale = max(1.0, np.abs(L).sum(axis=1).max())
    if np.abs(L.sum(axis=1)).max() > 1e-9 * scale:
        raise InputError("matrix rows do not sum to zero; not a Laplacian")
    return digraph_from_matrix(A, labels)


def laplacian(g: ComplexDigraph) -> Laplacian:
    """``L = D_out - A`` with the complex out-degree diagonal."""
    A = g.A
    D_out = np.diag(A.sum(axis=1))
    D_in = np.diag(A.sum(axis=0))
    L = D_out - A
    # Diagonal entries are formed from row sums in the same order, so the
    # residual is at rounding level.
    resid = np.abs(L.sum(axis=1)).max()
    norm = np.abs(L).sum(axis=1).max()
    assert resid <= 1e-12 * max(1.0, norm), resid
    return Laplacian(_readonly(L), _readonly(D_out), _readonly(D_in))


def _support_of(M) -> np.ndarray:
    M = np.asarray(M)
    S = np.abs(M) > 0
    np.fill_diagonal(S, False)
    return S


def _scc(support):
    n = support.shape[0]
    ncomp, labels = connected_components(csr_matrix(support.astype(np.int8)), directed=True,
                                         connection="strong")
    return ncomp, labels


def structural_connectivity(g) -> ConnectivityReport:
    """Connectivity of the support digraph via SCC condensation.

    Accepts a :class:`ComplexDigraph` or any square matrix (its off-diagonal
    support is used, which makes ``L`` and ``A`` interchangeable).
    """
    M = g.A if isinstance(g, ComplexDigraph) else np.asarray(g)
    S = _support_of(M)
    n = S.shape[0]
    ncomp, labels = _scc(S)
    nweak, _ = connected_components(csr_matrix(S.astype(np.int8)), directed=True, connection="weak")

    # condensation: an SCC is a sink class if no edge leaves it
    leaves = np.zeros(ncomp, dtype=bool)
    src, dst = np.nonzero(S)
    for i, j in zip(src, dst):
        if labels[i] != labels[j]:
            leaves[labels[i]] = True
    sink_classes = np.flatnonzero(~leaves)
    if len(sink_classes) == 1:
        reach = tuple(int(i) for i in np.flatnonzero(labels == sink_classes[0]))
    else:
        reach = ()

    if n >= 2:
        sinks = tuple(int(i) for i in np.flatnonzero(~S.any(axis=1)))
        sources = tuple(int(i) for i in np.flatnonzero(~S.any(axis=0)))
    else:
        sinks = sources = ()
    return ConnectivityReport(
        strongly_connected=bool(ncomp == 1),
        weakly_connected=bool(nweak == 1),
        sinks=sinks,
        sources=sources,
        globally_reachable=reach,
        scc_count=int(ncomp),
        scc_labels=tuple(int(x) for x in labels),
    )


def walk_sum(g, rel_tol: float = 1e-9) -> WalkSum:
    """``sum_{k=0}^{n-1} A^k`` and the flags it supports.

    ``all_nonzero`` implies strong connectivity and ``column_all_nonzero[j]``
    implies node ``j`` is globally reachable. Neither converse holds.
    """
    A = g.A if isinstance(g, ComplexDigraph) else np.asarray(g, dtype=complex)
    n = A.shape[0]
    if n < 2:
        raise InputError("walk_sum needs n >= 2")
    S = np.eye(n, dtype=complex)
    P = np.eye(n, dtype=complex)
    for _ in range(n - 1):
        P = P @ A
        S = S + P
    thr = rel_tol * np.abs(S).sum(axis=1).max()
    nz = np.abs(S) > thr
    return WalkSum(S=S, all_nonzero=bool(nz.all()),
                   column_all_nonzero=tuple(bool(c) for c in nz.all(axis=0)), threshold=float(thr))


def is_irreducible(M) -> bool:
    """True iff the off-diagonal support of ``M`` is strongly connected.

    Reducibility is a zero-pattern property, so this works equally on ``A``,
    ``L`` or ``B = dI - L``. A 1x1 matrix is treated as irreducible.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] == 1:
        return True
    ncomp, _ = _scc(_support_of(M))
    return ncomp == 1


# --- JSON graph format -----------------------------------------------------

def graph_from_dict(obj) -> ComplexDigraph:
    """Parse the canonical graph JSON object.

    Edges carry either ``re``/``im`` or polar ``r``/``beta_deg``.
    """
    try:
        n = obj["n"]
        raw_edges = obj.get("edges", [])
    except (TypeError, KeyError, AttributeError) as exc:
        raise ParseError(f"graph object needs 'n' and 'edges': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"'n' must be an integer, got {n!r}")
    edges = []
    for k, e in enumerate(raw_edges):
        try:
            src, dst = e["src"], e["dst"]
            if "re" in e or "im" in e:
                w = ComplexWeight(float(e.get("re", 0.0)), float(e.get("im", 0.0)))
            elif "r" in e:
                w = ComplexWeight.from_polar(float(e["r"]), float(e["beta_deg"]))
            else:
                raise KeyError("re/im or r/beta_deg")
        except (TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"edge #{k} malformed: {exc}") from None
        if not isinstance(src, int) or not isinstance(dst, int):
            raise ParseError(f"edge #{k} endpoints must be integers")
        edges.append((src, dst, w))
    return build_digraph(edges, n, obj.get("labels"))


def graph_to_dict(g: ComplexDigraph):
    out = {
        "n": g.n,
        "edges": [{"src": i, "dst": j, "re": w.re, "im": w.im} for i, j, w in g.edges()],
    }
    if g.labels is not None:
        out["labels"] = list(g.labels)
    return out


def load_graph(path) -> ComplexDigraph:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return graph_from_dict(obj)
