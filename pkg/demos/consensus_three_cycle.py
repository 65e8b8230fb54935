"""Consensus on a complex-weighted 3-cycle whose -L is eventually exponentially positive.

Run with ``python3 demos/consensus_three_cycle.py``.
"""

import numpy as np

from clx import fixtures
from clx.certify import certify_rEEP, consensus_verdict, predict_steady_state
from clx.flows import draw_initial_state, matrix_exponential, simulate

L = fixtures.laplacian_of("ex3")
print("Laplacian:\n", np.round(L, 3))
print("eigenvalues:", np.round(np.linalg.eigvals(L), 4))

cert = certify_rEEP(L)
print(f"\nrEEP: {cert.verdict.value} via the {cert.route.value.lower()} route")
for h in cert.hypotheses:
    print(f"  {'ok ' if h.passed else 'no '} {h.name}")

print("\nRe(exp(-L)), every entry positive:\n", np.round(matrix_exponential(-L, 1.0).real, 4))

v = consensus_verdict(L)
x0 = draw_initial_state(3, v.w, seed=42)
traj = simulate(L, x0, 20.0 / v.gap, 201)
print(f"\nverdict: {v.kind.value}, spectral gap {v.gap:.4f}")
print("predicted steady state:", np.round(predict_steady_state(L, x0, v), 6))
print("simulated final state: ", np.round(traj.final_state, 6))
print(f"final consensus error:  {traj.consensus_error[-1]:.2e}")
