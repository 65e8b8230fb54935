"""Message counts between agents as complex weights, and who ends up most influential.

Edge i -> j gets weight messages_ij + 1j * messages_ji.
"""

import numpy as np

from clx import fixtures
from clx.cli import ingest_eies
from clx.design import consensus_pipeline
from clx.diffusion import influence_vector, is_hermitian, is_weight_balanced

g = ingest_eies(fixtures.data_path("eies_sample.csv"))
print(f"{g.n} agents, weight balanced: {is_weight_balanced(g)}, Hermitian: {is_hermitian(g)}")

res = consensus_pipeline(g)
v = res.verdict_original
print("verdict:", v.kind.value, "| nonzero eigenvalues:", np.round(v.j_reduced_spectrum, 2))
print(f"branch: {res.branch}, consensus reached: {res.consensus_reached}")

infl = influence_vector(g)
print("\ninfluence:", np.round(infl.values, 4))
print("most influential agent:", infl.most_influential,
      "(advisory only)" if infl.advisory else "")
