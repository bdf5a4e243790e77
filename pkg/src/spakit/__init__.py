"""Structural physical approximations of partial transposition and state squaring."""
from .choi import ChoiOperator, apply, choi_of_map, is_cp, is_trace_preserving, tensor_maps
from .detect import ProtocolReport, Verdict, eigenvalues_from_moments, invert_ps, moments, verdict_exact, verdict_sampled
from .linalg import Spectrum, hermitian_eig, is_psd, kron, partial_trace, partial_transpose
from .povm import MeasurementModel, build_ps_model, complete_model, simulate_expectation, validate_model
from .sampling import sample_outcomes
from .spa import SpaResult, choi_ps, choi_R, spa_general, spa_partial_transpose, spa_rho_square

__version__ = "0.1.0"

__all__ = [
    "ChoiOperator", "apply", "choi_of_map", "is_cp", "is_trace_preserving", "tensor_maps",
    "ProtocolReport", "Verdict", "eigenvalues_from_moments", "invert_ps", "moments",
    "verdict_exact", "verdict_sampled",
    "Spectrum", "hermitian_eig", "is_psd", "kron", "partial_trace", "partial_transpose",
    "MeasurementModel", "build_ps_model", "complete_model", "simulate_expectation", "validate_model",
    "sample_outcomes",
    "SpaResult", "choi_ps", "choi_R", "spa_general", "spa_partial_transpose", "spa_rho_square",
]
