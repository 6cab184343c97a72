"""d-computable coefficient matrices, their multipliers and entanglement measures."""

from .entanglement import (
    DensityMatrix,
    Ensemble,
    MixedConcurrenceResult,
    SpectralSummary,
    assemble_density,
    build_p,
    build_p_legacy16,
    concurrence_legacy,
    concurrence_pform,
    concurrence_pure,
    eof_from_concurrence,
    eof_spectral,
    mixed_concurrence,
    spectral_summary,
)
from .identities import IdentityReport, run_checks, verify_family_suite
from .linalg import ConvergenceError, hermitian_eigensystem, lu_solve, psd_sqrt
from .multipliers import EXPLICIT_J4, RECURSIVE, Multiplier, build_I, build_J
from .solver import BenchRecord, SolveForm, StructuredSystem, bench_solve, structured_solve
from .states import (
    BracketNorm,
    PureState,
    StateParams,
    bracket_norm,
    build_matrix,
    normalize,
    partial_trace_rho1,
    state_from_params,
    vectorize,
)

__version__ = "0.1.0"
