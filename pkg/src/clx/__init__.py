"""Laplacian flows on complex-weighted digraphs: consensus analysis, certificates and modified flows."""

from .certify import (
    Certificate,
    ConsensusKind,
    ConsensusVerdict,
    Property,
    Route,
    Verdict,
    certify_rEENN,
    certify_rEEP,
    consensus_verdict,
    empirical_sign_pattern,
    predict_steady_state,
)
from .design import (
    ModifiedFlowDesign,
    PipelineResult,
    consensus_pipeline,
    design_modified_flow,
    modified_matrix,
    stabilizing_diagonal,
)
from .diffusion import InfluenceVector, influence_vector, is_weight_balanced, random_walk_laplacian
from .dominance import left_tan_condition, real_dominance, right_tan_condition
from .errors import AnalysisError, ClxError, InputError
from .flows import Trajectory, consensus_error, matrix_exponential, simulate
from .graphcore import (
    ComplexDigraph,
    ComplexWeight,
    build_digraph,
    digraph_from_matrix,
    laplacian,
    load_graph,
    structural_connectivity,
    walk_sum,
)
from .spectral import (
    corank,
    eig,
    kernel_basis,
    kernel_pair,
    pf_classify,
    reduced_spectrum,
    spectral_abscissa,
    translated_matrix,
)

__version__ = "0.1.0"
