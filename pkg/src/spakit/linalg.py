"""Dense complex linear algebra on small square matrices.

Matrices are plain ``numpy`` arrays of dtype complex128. Bipartite operators
use the ordering of :func:`numpy.kron`: index ``i*dB + k`` pairs row ``i`` of
the first factor with row ``k`` of the second.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-9
DENSITY_TOL = 1e-9
PSD_TOL = 1e-9

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class InvalidStateError(ValueError):
    """A matrix failed Hermiticity, trace or positivity validation."""


class ConvergenceError(ArithmeticError):
    """Jacobi sweeps did not bring the off-diagonal norm below threshold."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*db+k, j*db+l)`` equals ``a[i,j]*b[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Sequence) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = kron(out, f)
    return out


def _split(m, dims: tuple[int, int]) -> np.ndarray:
    m = as_matrix(m)
    da, db = dims
    if da < 1 or db < 1 or m.shape[0] != da * db:
        raise DimensionError(f"matrix of dim {m.shape[0]} does not factor as {da}x{db}")
    return m.reshape(da, db, da, db)


def partial_trace(m, dims: tuple[int, int], over: int = 1) -> np.ndarray:
    """Trace out subsystem ``over`` (0 = first, 1 = second) of a bipartite operator."""
    t = _split(m, dims)
    if over == 0:
        return np.einsum("ikil->kl", t)
    if over == 1:
        return np.einsum("ikjk->ij", t)
    raise ValueError(f"subsystem index must be 0 or 1, got {over!r}")


def partial_transpose(m, dims: tuple[int, int], on: int = 1) -> np.ndarray:
    """Transpose the blocks belonging to subsystem ``on`` (0 = first, 1 = second)."""
    t = _split(m, dims)
    if on == 0:
        t = t.transpose(2, 1, 0, 3)
    elif on == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem index must be 0 or 1, got {on!r}")
    n = dims[0] * dims[1]
    return np.ascontiguousarray(t).reshape(n, n)


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise InvalidStateError(f"matrix is not Hermitian (max |M - M^dag| = {defect:.3e})")
    return m


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order, with optional eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    sweeps: int = 0

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def tolist(self) -> list[float]:
        return [float(x) for x in self.eigenvalues]


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Disjoint index pairs covering every (p, q) once per sweep.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(
    h,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    herm_tol: float = HERMITIAN_TOL,
) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each sweep applies every (p, q) rotation once, grouped into rounds of
    disjoint pairs so a round is a single unitary similarity. Iteration stops
    when the off-diagonal Frobenius norm falls below ``tol * max(1, ||h||_F)``.

    Raises:
        InvalidStateError: ``h`` is not Hermitian within ``herm_tol``.
        ConvergenceError: ``max_sweeps`` exhausted; carries the residual norm.
    """
    a = check_hermitian(h, herm_tol)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    rounds = _round_robin(n)

    sweeps = 0
    off = _off_norm(a)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})",
                residual=off,
            )
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            phase = np.exp(1j * np.angle(apq))
            app = a[p, p].real
            aqq = a[q, q].real
            theta = 0.5 * np.arctan2(2.0 * r, aqq - app)
            c = np.cos(theta)
            s = np.sin(theta)
            # 2x2 blocks of the rotation G acting on coordinates (p, q)
            gpp, gpq = c, s
            gqp, gqq = -s * phase.conj(), c * phase.conj()
            ap, aq = a[:, p], a[:, q]
            a[:, p], a[:, q] = ap * gpp + aq * gqp, ap * gpq + aq * gqq
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = vp * gpp + vq * gqp, vp * gpq + vq * gqq
            ap, aq = a[p, :], a[q, :]
            a[p, :] = np.conj(gpp)[:, None] * ap + np.conj(gqp)[:, None] * aq
            a[q, :] = np.conj(gpq)[:, None] * ap + np.conj(gqq)[:, None] * aq
        sweeps += 1
        off = _off_norm(a)

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(eigenvalues=w[order], eigenvectors=v[:, order], sweeps=sweeps)


def eigvalsh(h) -> np.ndarray:
    return hermitian_eig(h).eigenvalues


class PsdCheck(NamedTuple):
    is_psd: bool
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.is_psd


def is_psd(h, tol: float = PSD_TOL) -> PsdCheck:
    """PSD test relative to spectral magnitude: ``min >= -tol * max(1, max|eig|)``."""
    w = eigvalsh(h)
    scale = max(1.0, float(np.max(np.abs(w))))
    lo = float(w[-1])
    return PsdCheck(lo >= -tol * scale, lo)


def check_density_matrix(m, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; returns the matrix unchanged.

    Violations raise :class:`InvalidStateError`; nothing is projected or renormalised.
    """
    m = check_hermitian(m, tol)
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    lo = float(eigvalsh(m)[-1])
    if lo < -tol:
        raise InvalidStateError(f"matrix has negative eigenvalue {lo:.3e}")
    return m


def is_density_matrix(m, tol: float = DENSITY_TOL) -> bool:
    try:
        check_density_matrix(m, tol)
    except (InvalidStateError, DimensionError):
        return False
    return True


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def max_abs_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
