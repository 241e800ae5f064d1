"""Numerical toolkit for trace inequalities on positive-definite matrices.

Validated matrix types and spectral calculus live in :mod:`traceineq.core`;
relative entropies and their solvers in :mod:`traceineq.entropy`; weighted
geometric means and geodesics in :mod:`traceineq.means`; Legendre-type
transforms with certificates in :mod:`traceineq.legendre`; majorization tools
in :mod:`traceineq.majorization`; and the randomized verification harness in
:mod:`traceineq.harness`.
"""

from .core import (
    ConsistencyError,
    DensityMatrix,
    DimensionMismatch,
    DimensionTooSmall,
    DomainError,
    EnsembleSpec,
    HermitianMatrix,
    LengthMismatch,
    NonConvergence,
    NotUnitary,
    ParamOutOfDomain,
    PositiveMatrix,
    QuadratureFailure,
    SchattenNorms,
    SpectralDecomposition,
    ToolkitError,
    UnknownCheckId,
    UnknownSuite,
    apply_function,
    divided_difference_apply,
    dlog_inverse_apply,
    lambda_max,
    matrix_from_json,
    matrix_to_json,
    pinch,
    random_ensemble,
    read_matrix,
    sandwich,
    schatten,
    spectral_decompose,
    write_matrix,
)
from .entropy import (
    DonaldSolution,
    EntropyChain,
    bs_entropy,
    donald,
    donald_pinched,
    entropy_chain,
    pinsker_bound,
    solve_donald_q,
    umegaki,
)
from .legendre import (
    BSMaximizer,
    GoldenThompsonChain,
    SaddleValue,
    dual_relation_residual,
    exp_difference_check,
    geo_exp_lower,
    gibbs_state,
    golden_thompson_chain,
    phi_bs,
    phi_donald,
    phi_umegaki,
    psi_bs,
    psi_donald,
    psi_umegaki,
    solve_bs_maximizer,
)
from .majorization import (
    MajorizationVerdict,
    bosulem_map,
    choi_map,
    eigen_majorizes,
    majorizes,
)
from .harness import (
    CheckDescriptor,
    CheckReport,
    TrialRecord,
    catalogue,
    report_to_csv,
    report_to_json,
    run_check,
    run_suite,
    suites,
)
from .means import (
    GeodesicPath,
    geodesic_distance,
    geometric_mean_quadrature,
    harmonic_mean,
    midpoint_inverse,
    parallel_sum,
    weighted_geometric_mean,
)

__version__ = "0.1.0"
