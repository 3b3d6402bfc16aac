"""Simulation tools for one-dimensional chains with heavy-tailed randomness.

Piecewise-constant random potentials (dense or sparse bumps, signed or not,
with Frechet-tailed heights and gaps) are propagated exactly through transfer
matrices and the Prufer phase flow; on top of that sit estimators for
Lyapunov exponents on linear and heavy-tail scales, rotation numbers and the
integrated density of states, stable-limit diagnostics, phase-chain mixing,
and a finite-box spectral solver.  The ``heavykp`` CLI batches all of it over
parameter grids with reproducible, seed-splittable randomness.
"""

__version__ = "0.1.0"

from .estimators import (
    IdsEstimate,
    IdsScale,
    LyapunovEstimate,
    LyapunovScale,
    chain_mixing,
    darling_ratio,
    estimate_ids,
    estimate_lyapunov,
    ids_trace,
    lyapunov_trace,
    model3_joint_samples,
    nonlinear_samples,
    sweep_chains,
)
from .potentials import (
    Model,
    ModelConfig,
    Piece,
    PieceKind,
    Realization,
    generate,
    realization_from_csv,
)
from .prufer import (
    PhaseChainState,
    PruferState,
    TraceRecord,
    advance_interval,
    advance_piece,
    advance_realization,
    boundary_theta,
    phase_chain_step,
    phase_fold,
    tan_update_F,
    tan_update_G,
)
from .rng import (
    RngStream,
    TailKind,
    TailLaw,
    frechet_cdf,
    frechet_from_uniform,
    frechet_tail,
    sample_bump_height,
    sample_frechet,
    sample_gap_length,
    sample_stable_oracle,
    split_stream,
)
from .spectrum import (
    BoxProblem,
    EigenResult,
    boundary_phase,
    count_below,
    decay_fit,
    eigen_result,
    find_eigenvalues,
    phase_trace,
)
from .stats import Ecdf, LinearFit, MeanCi, ks_distance, linear_fit, mean_ci
from .transfer import (
    EnergyFrame,
    Mat2,
    SaturationError,
    ScaledMat,
    accumulate,
    apply,
    det_defect,
    gap_matrix,
    identity_mat,
    log_norm,
    model3_bump_matrix,
    stored_det,
    transfer_matrix,
)

__all__ = [
    "__version__",
    # rng
    "RngStream", "TailKind", "TailLaw", "split_stream",
    "sample_frechet", "sample_bump_height", "sample_gap_length",
    "sample_stable_oracle", "frechet_from_uniform", "frechet_tail", "frechet_cdf",
    # transfer
    "EnergyFrame", "Mat2", "ScaledMat", "SaturationError",
    "transfer_matrix", "gap_matrix", "model3_bump_matrix", "identity_mat",
    "accumulate", "log_norm", "apply", "stored_det", "det_defect",
    # potentials
    "Model", "ModelConfig", "Piece", "PieceKind", "Realization",
    "generate", "realization_from_csv",
    # prufer
    "PruferState", "TraceRecord", "PhaseChainState",
    "boundary_theta", "advance_piece", "advance_interval", "advance_realization",
    "phase_chain_step", "phase_fold", "tan_update_F", "tan_update_G",
    # estimators
    "LyapunovScale", "IdsScale", "LyapunovEstimate", "IdsEstimate",
    "estimate_lyapunov", "estimate_ids", "lyapunov_trace", "ids_trace",
    "nonlinear_samples", "model3_joint_samples", "darling_ratio",
    "chain_mixing", "sweep_chains",
    # spectrum
    "BoxProblem", "EigenResult", "boundary_phase", "phase_trace",
    "count_below", "find_eigenvalues", "decay_fit", "eigen_result",
    # stats
    "Ecdf", "LinearFit", "MeanCi", "ks_distance", "linear_fit", "mean_ci",
]
