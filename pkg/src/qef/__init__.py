"""Quasi-equiangular frames: membership checks, restricted isometry
constants, probabilistic RIC bounds and a Monte Carlo harness."""

from .frame_core import (
    FrameMatrix,
    GramMatrix,
    QefCheckReport,
    QefParams,
    check_qef,
    coherence,
    gram,
    simplex_etf,
    welch_bound,
)
from .genmodel import (
    GenSpec,
    GramDecomposition,
    PerturbationModel,
    gen_qef_gram,
    gen_sign_pattern,
    psd_diagnostics,
    synthesize_frame,
)
from .ric import (
    CliqueSpec,
    MomentTriple,
    RicBoundReport,
    SubsetCapExceeded,
    clique_ric,
    empirical_moments,
    etf_ric,
    exact_ric,
    greedy_clique,
    max_gershgorin_bound,
    moments_uniform,
    sampled_ric,
    theorem1_lower,
    theorem1_upper,
)
from .spectral import (
    EigenResult,
    centered_opnorm,
    gershgorin_bound,
    rank1_deformation_spectrum,
    sym_eigs,
)

__version__ = "0.1.0"
