"""Worked example graphs used by the tests, demos and the CLI corpus.

Node indices are 0-based. Each entry stores the edge list ``(src, dst, weight)``
of the adjacency matrix, so ``laplacian(graph(name))`` reproduces the
Laplacian of the example.

=========  ===============================================================
name       what it shows
=========  ===============================================================
``ex1``    3-cycle; one eigenvalue of ``L`` in the left half-plane
``ex2``    walk sum ``I + A + A^2`` with a cancelling entry
``ex3``    3-cycle; ``-L`` eventually exponentially positive (theorem route)
``ex4``    3-cycle; positive but the left eigenvector is not real dominant
``ex6``    4 nodes, one globally reachable sink
``ex7``    4 nodes, two sinks
``ex8``    same graph as ``ex1``; subject of the modified-flow design
``ex9``    weight-balanced 3-cycle for diffusion
``trivial``  single node
``eies``   synthetic 7-agent message-count graph
=========  ===============================================================
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .graphcore import ComplexDigraph, ComplexWeight, build_digraph, laplacian

__all__ = ["EDGES", "SIZES", "names", "graph", "laplacian_of", "data_path", "EX8_TARGETS"]

EDGES = {
    "ex1": [(0, 2, 250 + 960j), (1, 0, 173 + 984j), (2, 1, 87.2 + 996j)],
    "ex2": [(0, 2, 1 + 1j), (1, 0, 1 + 2j), (1, 2, 1 - 3j)],
    "ex3": [(0, 2, 30 + 10j), (1, 0, 100 + 20j), (2, 1, 1 + 1j)],
    "ex4": [(0, 2, 100 + 14j), (1, 0, 0.55 + 1.92j), (2, 1, 38.6 + 10j)],
    "ex6": [(1, 0, 10 + 1j), (2, 0, 5 - 1j), (2, 1, 3 - 2j), (3, 0, 7 + 5j), (3, 2, 2 + 1j)],
    "ex7": [(1, 0, 4 + 2j), (1, 2, 5 - 1j), (3, 0, 6 + 2j), (3, 2, 8 - 3j)],
    "ex9": [(0, 2, 1 + 0.5j), (1, 0, 1 + 0.5j), (2, 1, 1 + 0.5j)],
    "trivial": [],
}
EDGES["ex8"] = EDGES["ex1"]
SIZES = {"ex1": 3, "ex2": 3, "ex3": 3, "ex4": 3, "ex6": 4, "ex7": 4, "ex8": 3, "ex9": 3, "trivial": 1, "eies": 7}

# positive reals the Ex. 8 design assigns, paired with the eigenvalues
# 1107.7+1321.7i and -597.5+1618.3i respectively
EX8_TARGETS = (1408.0, 1219.0)


def names():
    return sorted(SIZES)


def data_path(filename: str):
    return resources.files("clx") / "data" / filename


def graph(name: str) -> ComplexDigraph:
    if name == "eies":
        from .cli import ingest_eies

        return ingest_eies(data_path("eies_sample.csv"))
    if name not in EDGES:
        raise KeyError(f"unknown fixture {name!r}; choose from {names()}")
    edges = [(i, j, ComplexWeight.from_complex(w)) for i, j, w in EDGES[name]]
    return build_digraph(edges, SIZES[name])


def laplacian_of(name: str) -> np.ndarray:
    return laplacian(graph(name)).L
