"""Measure-and-prepare realisations of Choi operators.

The two-qubit partial-transposition SPA splits into 32 product terms
``Pi_j^T (x) rho_j``: six ``W`` blocks, each a separable two-qubit-like state
with a four-term rank-one decomposition, plus eight diagonal ``S`` terms.
All weights live in ``Pi_j``; every ``rho_j`` has unit trace, so
``Tr[rho Pi_j]`` is the literal outcome probability.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .choi import ChoiOperator
from .linalg import (
    DimensionError,
    PSD_TOL,
    as_matrix,
    check_hermitian,
    eigvalsh,
    is_psd,
    kron,
    partial_trace,
    partial_transpose,
    projector,
)
from .spa import spa_rho_square, symmetric_subspace_isometry

MODEL_TOL = 1e-9
RANK_TOL = 1e-9

# (input |ij>, input |kl>, output |ab>, output |cd>) for each W block, in print order.
W_TERMS: tuple[tuple[str, str, str, str], ...] = (
    ("00", "10", "00", "10"),
    ("01", "11", "01", "11"),
    ("00", "01", "01", "00"),
    ("00", "11", "01", "10"),
    ("11", "10", "10", "11"),
    ("10", "01", "11", "00"),
)
# (input, output) for S terms with weight one, then weight two.
S_UNIT_TERMS: tuple[tuple[str, str], ...] = (("00", "00"), ("11", "11"), ("10", "10"), ("01", "01"))
S_DOUBLE_TERMS: tuple[tuple[str, str], ...] = (("00", "11"), ("11", "00"), ("01", "10"), ("10", "01"))


@dataclass(frozen=True)
class PovmElement:
    operator: np.ndarray
    label: str


@dataclass(frozen=True)
class MeasurementModel:
    """POVM elements paired with the states prepared on each outcome.

    An output of ``None`` marks a heralding outcome whose post-measurement
    state is not fixed by the outcome alone (coarse-grained success events).
    """

    elements: tuple[PovmElement, ...]
    outputs: tuple[np.ndarray | None, ...]
    dim_in: int
    dim_out: int
    failure_element: PovmElement | None = None

    def __post_init__(self):
        if len(self.elements) != len(self.outputs):
            raise ValueError(
                f"{len(self.elements)} elements but {len(self.outputs)} output states"
            )
        for e in self.elements:
            if e.operator.shape != (self.dim_in, self.dim_in):
                raise DimensionError(f"element {e.label!r} has shape {e.operator.shape}")
        for rho in self.outputs:
            if rho is not None and rho.shape != (self.dim_out, self.dim_out):
                raise DimensionError(f"output state has shape {rho.shape}")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.elements]

    def element_sum(self, include_failure: bool = True) -> np.ndarray:
        total = np.zeros((self.dim_in, self.dim_in), dtype=np.complex128)
        for e in self.elements:
            total = total + e.operator
        if include_failure and self.failure_element is not None:
            total = total + self.failure_element.operator
        return total

    def choi(self) -> ChoiOperator:
        """``sum_j Pi_j^T (x) rho_j`` over outcomes with a fixed output state."""
        n = self.dim_in * self.dim_out
        total = np.zeros((n, n), dtype=np.complex128)
        for e, rho in zip(self.elements, self.outputs):
            if rho is None:
                raise ValueError(f"outcome {e.label!r} has no fixed output state")
            total += kron(e.operator.T, rho)
        return ChoiOperator(total, self.dim_in, self.dim_out)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def w_matrix() -> np.ndarray:
    """The 4x4 operator shared by all W blocks, basis up-up, up-down, down-up, down-down."""
    return np.array(
        [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]], dtype=np.complex128
    )


def w_rank_one_terms(up_in, down_in, up_out, down_out) -> list[tuple[np.ndarray, np.ndarray]]:
    """Vectors ``(phi_j, psi_j)``, j = 1..4, with ``W = 1/4 sum_j phi phi^+ (x) psi psi^+``.

    ``phi_j = up + i^j down`` on the input side and ``psi_j = up + i^-j down``
    on the output side; both have squared norm 2.
    """
    terms = []
    for j in range(1, 5):
        phase = 1j**j
        terms.append((up_in + phase * down_in, up_out + np.conj(phase) * down_out))
    return terms


def w_decomposition() -> np.ndarray:
    """Rebuilds :func:`w_matrix` from its four product terms on a qubit pair."""
    up, down = np.array([1, 0], dtype=np.complex128), np.array([0, 1], dtype=np.complex128)
    return 0.25 * sum(
        kron(projector(phi), projector(psi)) for phi, psi in w_rank_one_terms(up, down, up, down)
    )


def build_ps_model() -> MeasurementModel:
    """32-outcome measure-and-prepare model of the two-qubit SPA ``P_S``."""
    elements: list[PovmElement] = []
    outputs: list[np.ndarray] = []

    def add(weight: float, in_proj: np.ndarray, out_proj: np.ndarray, label: str) -> None:
        norm = float(np.trace(out_proj).real)
        elements.append(PovmElement(weight * norm * in_proj.T, label))
        outputs.append(out_proj / norm)

    for ij, kl, ab, cd in W_TERMS:
        terms = w_rank_one_terms(_ket(ij), _ket(kl), _ket(ab), _ket(cd))
        for j, (phi, psi) in enumerate(terms, start=1):
            add(1 / 36, projector(phi), projector(psi), f"W[{ij}{kl}|{ab}{cd}]#{j}")
    for ij, ab in S_UNIT_TERMS:
        add(1 / 9, projector(_ket(ij)), projector(_ket(ab)), f"S[{ij}|{ab}]")
    for ij, ab in S_DOUBLE_TERMS:
        add(2 / 9, projector(_ket(ij)), projector(_ket(ab)), f"2S[{ij}|{ab}]")
    return MeasurementModel(tuple(elements), tuple(outputs), 4, 4)


class Expectation(NamedTuple):
    probabilities: np.ndarray
    failure_probability: float
    expected_output: np.ndarray


def outcome_probabilities(model: MeasurementModel, rho) -> tuple[np.ndarray, float]:
    rho = as_matrix(rho)
    if rho.shape[0] != model.dim_in:
        raise DimensionError(f"model expects input dim {model.dim_in}, got {rho.shape[0]}")
    p = np.array([np.trace(rho @ e.operator).real for e in model.elements])
    if model.failure_element is not None:
        fail = float(np.trace(rho @ model.failure_element.operator).real)
    else:
        fail = 0.0
    return p, fail


def simulate_expectation(model: MeasurementModel, rho) -> Expectation:
    """Outcome probabilities ``Tr[rho Pi_j]`` and the averaged output ``sum_j p_j rho_j``.

    Heralding outcomes (``None`` output) contribute probability but no state.
    """
    p, fail = outcome_probabilities(model, rho)
    out = np.zeros((model.dim_out, model.dim_out), dtype=np.complex128)
    for pj, r in zip(p, model.outputs):
        if r is not None:
            out += pj * r
    return Expectation(p, fail, out)


@dataclass
class ValidationReport:
    passed: bool
    element_min_eigenvalues: list[float]
    output_trace_defects: list[float | None]
    output_min_eigenvalues: list[float | None]
    sum_defect: float
    failure_min_eigenvalue: float | None = None
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "sum_defect": self.sum_defect,
            "element_min_eigenvalues": self.element_min_eigenvalues,
            "output_trace_defects": self.output_trace_defects,
            "output_min_eigenvalues": self.output_min_eigenvalues,
            "failure_min_eigenvalue": self.failure_min_eigenvalue,
            "violations": self.violations,
        }


def validate_model(model: MeasurementModel, tol: float = MODEL_TOL) -> ValidationReport:
    violations = []
    elem_min = []
    for idx, e in enumerate(model.elements):
        lo = float(eigvalsh(e.operator)[-1])
        elem_min.append(lo)
        if lo < -tol:
            violations.append(f"element {idx} ({e.label}) not PSD: min eigenvalue {lo:.3e}")
    trace_defects: list[float | None] = []
    out_min: list[float | None] = []
    for idx, rho in enumerate(model.outputs):
        if rho is None:
            trace_defects.append(None)
            out_min.append(None)
            continue
        defect = float(abs(np.trace(rho) - 1.0))
        lo = float(eigvalsh(rho)[-1])
        trace_defects.append(defect)
        out_min.append(lo)
        if defect > tol:
            violations.append(f"output {idx} trace off by {defect:.3e}")
        if lo < -tol:
            violations.append(f"output {idx} not PSD: min eigenvalue {lo:.3e}")
    fail_min = None
    if model.failure_element is not None:
        fail_min = float(eigvalsh(model.failure_element.operator)[-1])
        if fail_min < -tol:
            violations.append(f"failure element not PSD: min eigenvalue {fail_min:.3e}")
    sum_defect = float(np.max(np.abs(model.element_sum() - np.eye(model.dim_in))))
    if sum_defect > tol:
        violations.append(f"elements sum to identity only within {sum_defect:.3e}")
    return ValidationReport(
        passed=not violations,
        element_min_eigenvalues=elem_min,
        output_trace_defects=trace_defects,
        output_min_eigenvalues=out_min,
        sum_defect=sum_defect,
        failure_min_eigenvalue=fail_min,
        violations=violations,
    )


class Separability(str, Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


class PptResult(NamedTuple):
    verdict: Separability
    min_pt_eigenvalue: float


# Local dimension pairs where a positive partial transpose implies separability.
_PPT_SUFFICIENT = {(2, 2), (2, 3), (3, 2)}


def ppt_separability_check(c, dims: tuple[int, int], tol: float = PSD_TOL) -> PptResult:
    """Peres-Horodecki test of a (possibly unnormalised) bipartite PSD operator."""
    m = c.matrix if isinstance(c, ChoiOperator) else check_hermitian(c)
    check = is_psd(m, tol)
    if not check:
        raise ValueError(f"operator is not PSD (min eigenvalue {check.min_eigenvalue:.3e})")
    pt = partial_transpose(m, dims, on=1)
    w = eigvalsh(pt)
    lo = float(w[-1])
    if lo < -tol * max(1.0, float(np.max(np.abs(w)))):
        return PptResult(Separability.ENTANGLED, lo)
    if tuple(dims) in _PPT_SUFFICIENT:
        return PptResult(Separability.SEPARABLE, lo)
    return PptResult(Separability.INCONCLUSIVE, lo)


def restrict_input(c: ChoiOperator, isometry) -> ChoiOperator:
    """Compress the input factor of ``c`` onto the range of ``isometry`` (columns)."""
    v = np.asarray(isometry, dtype=np.complex128)
    if v.shape[0] != c.dim_in:
        raise DimensionError(f"isometry has {v.shape[0]} rows, map input dim is {c.dim_in}")
    # Choi input factor carries rho^T, hence the conjugated isometry.
    big = np.kron(v.conj(), np.eye(c.dim_out))
    return ChoiOperator(big.conj().T @ c.matrix @ big, v.shape[1], c.dim_out)


def rs_symmetric_restriction() -> ChoiOperator:
    """``R_S`` on (3-dim symmetric input) (x) (qubit output), a 6x6 operator."""
    return restrict_input(spa_rho_square().choi, symmetric_subspace_isometry())


def heralding_model(c: ChoiOperator) -> MeasurementModel:
    """One-outcome model whose element is the success operator ``Tr_K[C]^T``.

    Suitable for sampling success and failure of a trace-decreasing map
    without a product decomposition of its Choi operator.
    """
    success = partial_trace(c.matrix, c.dims, over=1).T
    return MeasurementModel((PovmElement(success, "success"),), (None,), c.dim_in, c.dim_out)


def complete_model(model: MeasurementModel, tol: float = MODEL_TOL) -> MeasurementModel:
    """Add the failure element ``1 - sum_j Pi_j``; omitted when numerically zero."""
    defect = np.eye(model.dim_in) - model.element_sum(include_failure=False)
    w = eigvalsh(defect)
    if w[-1] < -tol:
        raise ValueError(f"elements exceed the identity (defect min eigenvalue {w[-1]:.3e})")
    if w[0] <= tol:
        return replace(model, failure_element=None)
    return replace(model, failure_element=PovmElement(defect, "failure"))


class Completeness(NamedTuple):
    is_complete: bool
    rank: int


def informational_completeness(model: MeasurementModel, tol: float = RANK_TOL) -> Completeness:
    """Dimension of the real span of the POVM inside the Hermitian operators.

    Uses the Hilbert-Schmidt Gram matrix ``Re Tr[Pi_i Pi_j]``.
    """
    ops = [e.operator for e in model.elements]
    if model.failure_element is not None:
        ops.append(model.failure_element.operator)
    if not ops:
        return Completeness(False, 0)
    flat = np.array([o.reshape(-1) for o in ops])
    gram = (flat.conj() @ flat.T).real
    sv = np.linalg.svd(gram, compute_uv=False)
    rank = int(np.sum(sv > tol))
    return Completeness(rank == model.dim_in**2, rank)


def projective_model(vectors: Sequence, outputs: Sequence | None = None) -> MeasurementModel:
    """Model of rank-one projectors, each paired with the same projector as output."""
    projs = [projector(v) for v in vectors]
    d = projs[0].shape[0]
    outs = tuple(projs) if outputs is None else tuple(as_matrix(o) for o in outputs)
    elems = tuple(PovmElement(p, f"P{i}") for i, p in enumerate(projs))
    return MeasurementModel(elems, outs, d, outs[0].shape[0])
