"""Repairing a divergent flow by re-placing its nonzero spectrum.

The 3-cycle below has an eigenvalue in the left half-plane, so x' = -Lx blows
up. A diagonal S with S_ii = target_i / lambda_i moves every nonzero eigenvalue
onto a positive real while both kernel eigenvectors stay where they were.
"""

import numpy as np

from clx import fixtures
from clx.certify import consensus_verdict
from clx.design import consensus_pipeline, design_modified_flow
from clx.spectral import reduced_spectrum

L = fixtures.laplacian_of("ex8")
print("eigenvalues of L:", np.round(np.linalg.eigvals(L), 2))
print("verdict on L:", consensus_verdict(L).kind.value)

lam, _ = reduced_spectrum(L)
targets = [1408.0 if z.real > 0 else 1219.0 for z in lam]
d = design_modified_flow(L, targets)
print("\nS =", np.round(d.S, 5))
print("L_m =\n", np.round(d.L_m, 2))
print("eigenvalues of L_m:", np.round(d.spectrum_achieved, 3))
print("L_m is itself a Laplacian of a valid graph:", d.is_laplacian)

res = consensus_pipeline(fixtures.graph("ex8"), targets=targets, t_end=0.05)
print(f"\npipeline branch: {res.branch}, consensus reached: {res.consensus_reached}")
print(f"final consensus error: {res.trajectory.consensus_error[-1]:.2e}")
