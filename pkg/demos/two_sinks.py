"""A digraph with two sinks: the flow settles, but not on a common value."""

import numpy as np

from clx import fixtures
from clx.certify import certify_rEENN, consensus_verdict
from clx.flows import draw_initial_state, simulate
from clx.graphcore import structural_connectivity

g = fixtures.graph("ex7")
L = fixtures.laplacian_of("ex7")
print("sinks:", structural_connectivity(g).sinks)
print("eigenvalues:", np.round(np.linalg.eigvals(L), 4))

v = consensus_verdict(L)
print("verdict:", v.kind.value, "with corank", v.corank)
print("rEENN:", certify_rEENN(L).verdict.value)

x0 = draw_initial_state(4, seed=42)
traj = simulate(L, x0, 5.0, 101)
print("\nx0:         ", np.round(x0, 3))
print("final state:", np.round(traj.final_state, 3))
print(f"consensus error stays at {traj.consensus_error[-1]:.3f}")
