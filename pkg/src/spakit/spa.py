"""Structural physical approximations.

An unphysical but hermiticity-preserving map is mixed with the constant map
onto the maximally mixed state until its Choi operator becomes positive.
Provides the qudit partial-transposition SPA, the two-qubit ``P_S``, the
single-qubit squaring map ``rho (x) rho -> rho^2`` and its SPA ``R_S``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .choi import (
    ChoiOperator,
    ConvexMix,
    Depolarize,
    Identity,
    Tensor,
    Transpose,
    choi_of_map,
)
from .linalg import PSD_TOL, as_matrix, is_psd, projector

WEIGHT_TOL = 1e-12

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class SpaResult:
    choi: ChoiOperator
    noise_weight: float
    signal_weight: float
    # Present when the weights are known rationals rather than bisection output.
    exact_weights: tuple[Fraction, Fraction] | None = None


def pt_spa_weights(d: int) -> tuple[Fraction, Fraction]:
    """Noise and signal weights ``d^3/(d^3+1)`` and ``1/(d^3+1)``."""
    d3 = d**3
    return Fraction(d3, d3 + 1), Fraction(1, d3 + 1)


def partial_transpose_map(d: int) -> Tensor:
    return Tensor(Identity(d), Transpose(d))


def spa_partial_transpose(d: int) -> SpaResult:
    if d < 2:
        raise ValueError(f"local dimension must be at least 2, got {d}")
    noise, signal = pt_spa_weights(d)
    spec = ConvexMix(
        float(noise), Tensor(Depolarize(d, d), Depolarize(d, d)),
        float(signal), partial_transpose_map(d),
    )
    return SpaResult(choi_of_map(spec), float(noise), float(signal), (noise, signal))


def choi_ps() -> ChoiOperator:
    """Choi operator of the two-qubit SPA ``8/9 O(x)O + 1/9 I(x)T`` (16x16)."""
    return spa_partial_transpose(2).choi


def spa_general(c: ChoiOperator, psd_tol: float = PSD_TOL, weight_tol: float = WEIGHT_TOL) -> SpaResult:
    """Smallest admixture of the constant map that makes ``c`` completely positive.

    The mixture is ``(1-w) c + w D`` with ``D`` the Choi operator of
    ``X -> Tr(X) 1/dim_out``. ``w`` is located by bisection to ``weight_tol``;
    the returned weight is the upper end of the final bracket, so the result
    passes :func:`is_psd` at ``psd_tol``.
    """
    if is_psd(c.matrix, psd_tol):
        return SpaResult(c, 0.0, 1.0)
    noise = choi_of_map(Depolarize(c.dim_in, c.dim_out))

    def mixed(w: float) -> ChoiOperator:
        return ChoiOperator((1.0 - w) * c.matrix + w * noise.matrix, c.dim_in, c.dim_out)

    lo, hi = 0.0, 1.0
    while hi - lo > weight_tol:
        mid = 0.5 * (lo + hi)
        if is_psd(mixed(mid).matrix, psd_tol):
            hi = mid
        else:
            lo = mid
    return SpaResult(mixed(hi), hi, 1.0 - hi)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def _outer(u, v) -> np.ndarray:
    return np.outer(u, np.conj(v))


def plus_state() -> np.ndarray:
    """``(|01> + |10>)/sqrt(2)``, the symmetric one-excitation two-qubit vector."""
    return (_ket("01") + _ket("10")) / _SQRT2


def singlet_state() -> np.ndarray:
    return (_ket("01") - _ket("10")) / _SQRT2


def choi_R() -> ChoiOperator:
    """Hermitian Choi operator (8x8) of the linear map with ``rho (x) rho -> rho^2``.

    Input is two qubits ordered |00>,|01>,|10>,|11>; output is one qubit.
    """
    k00, k11, kp = _ket("00"), _ket("11"), plus_state()
    e0, e1 = _ket("0"), _ket("1")
    swap_part = 0.5 * (_outer(_ket("01"), _ket("10")) + _outer(_ket("10"), _ket("01")))
    m = (
        np.kron(_outer(k00, k00) + swap_part, _outer(e0, e0))
        + np.kron(_outer(k11, k11) + swap_part, _outer(e1, e1))
        + np.kron((_outer(k00, kp) + _outer(kp, k11)) / _SQRT2, _outer(e0, e1))
        + np.kron((_outer(kp, k00) + _outer(k11, kp)) / _SQRT2, _outer(e1, e0))
    )
    return ChoiOperator(m, 4, 2)


def choi_RS_explicit() -> ChoiOperator:
    """The SPA of the squaring map written out block by block (8x8)."""
    k00, k11, kp = _ket("00"), _ket("11"), plus_state()
    e0, e1 = _ket("0"), _ket("1")
    p00, p11, pp = _outer(k00, k00), _outer(k11, k11), _outer(kp, kp)
    m = (
        0.5 * np.kron(1.5 * p00 + pp + 0.5 * p11, _outer(e0, e0))
        + 0.5 * np.kron(1.5 * p11 + pp + 0.5 * p00, _outer(e1, e1))
        + np.kron((_outer(k00, kp) + _outer(kp, k11)) / (2 * _SQRT2), _outer(e0, e1))
        + np.kron((_outer(kp, k00) + _outer(k11, kp)) / (2 * _SQRT2), _outer(e1, e0))
    )
    return ChoiOperator(m, 4, 2)


def spa_rho_square() -> SpaResult:
    """``R_S = (O_bar + R)/2`` where ``O_bar`` sends any two-qubit state to ``1/2``.

    CP but trace decreasing: ``Tr_K[R_S]`` is the symmetric-subspace projector.
    """
    o_bar = choi_of_map(Depolarize(4, 2))
    half = Fraction(1, 2)
    return SpaResult(o_bar.scaled(0.5) + choi_R().scaled(0.5), 0.5, 0.5, (half, half))


def success_probability(rho) -> float:
    """Probability ``(1 + Tr rho^2)/2`` that ``R_S`` succeeds on ``rho (x) rho``."""
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a single-qubit state, got shape {rho.shape}")
    return 0.5 * (1.0 + float(np.trace(rho @ rho).real))


def symmetric_subspace_isometry() -> np.ndarray:
    """4x3 isometry with columns |00>, |+>, |11>."""
    return np.column_stack([_ket("00"), plus_state(), _ket("11")])


def symmetric_subspace_projector() -> np.ndarray:
    v = symmetric_subspace_isometry()
    return v @ v.conj().T


def singlet_projector() -> np.ndarray:
    return projector(singlet_state())
