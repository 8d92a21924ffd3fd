"""Certified lower bounds for adaptive quantum channel discrimination."""

from .applications import (
    CpfInstance,
    GroverInstance,
    TwoAdcInstance,
    adc_channel,
    bhattacharyya_angle,
    cpf_bound,
    cpf_problem,
    grover_bound,
    grover_problem,
    grover_success,
    two_adc_bures_bound,
    two_adc_trace_bound,
)
from .bounds import (
    AngleQuantities,
    BoundResult,
    DiscriminationProblem,
    covering_angle,
    fuchs_vdg_generalized,
    p_err_zero,
    theorem1_bound,
    theorem2_bound,
    theorem3_bound,
    theorem4_bound,
    unitary_exact_error,
)
from .bruteforce import (
    SearchConfig,
    exhaustive_small_check,
    max_weighted_trace_norm_search,
    min_avg_fidelity_search,
)
from .optimize import OptimizationReport, golden_section_max, optimize_theorem2, optimize_theorem4
from .qmat import (
    DensityMatrix,
    KrausChannel,
    PureState,
    StinespringIsometry,
    apply_channel,
    bures_angle,
    bures_distance,
    channel_tensor,
    fidelity,
    partial_trace,
    sine_distance,
    stinespring_from_kraus,
    tensor,
    trace_distance,
    trace_norm,
)
from .sdp import (
    ProgramResult,
    SdpProblem,
    SdpSolution,
    SolverFailure,
    avg_weighted_diamond_sdp,
    embed_hermitian,
    helstrom_error,
    min_avg_trace_norm_sdp,
    min_trace_norm_sdp,
    weighted_diamond_norm_sdp,
)

__version__ = "0.1.0"
