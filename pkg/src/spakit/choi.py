"""Choi operators of linear hermiticity-preserving maps.

A map ``E`` from operators on an input space ``H`` (dim ``dim_in``) to an
output space ``K`` (dim ``dim_out``) is stored input factor first::

    C = sum_{jk} |j><k| (x) E(|j><k|)

built from the unnormalised maximally entangled vector ``sum_j |j>|j>``. With
this ordering the action of the map is ``E(rho) = Tr_H[C (rho^T (x) 1_K)]``
and a measure-and-prepare map reads ``C = sum_j Pi_j^T (x) rho_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .linalg import (
    DimensionError,
    HERMITIAN_TOL,
    PSD_TOL,
    as_matrix,
    check_hermitian,
    is_psd,
    kron,
    partial_trace,
)

TP_TOL = 1e-9
CHOI_EQ_TOL = 1e-12


@dataclass(frozen=True)
class ChoiOperator:
    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != self.dim_in * self.dim_out:
            raise DimensionError(
                f"Choi matrix of dim {m.shape[0]} does not match dim_in*dim_out = "
                f"{self.dim_in}*{self.dim_out}"
            )
        check_hermitian(m, HERMITIAN_TOL)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_in, self.dim_out)

    def __add__(self, other: "ChoiOperator") -> "ChoiOperator":
        if self.dims != other.dims:
            raise DimensionError(f"cannot add Choi operators with dims {self.dims} and {other.dims}")
        return ChoiOperator(self.matrix + other.matrix, self.dim_in, self.dim_out)

    def scaled(self, w: float) -> "ChoiOperator":
        return ChoiOperator(w * self.matrix, self.dim_in, self.dim_out)

    def allclose(self, other: "ChoiOperator", tol: float = CHOI_EQ_TOL) -> bool:
        return self.dims == other.dims and float(np.max(np.abs(self.matrix - other.matrix))) <= tol


# Map descriptions. ``act`` is the direct definition of each map; the Choi
# construction only ever calls it on matrix units |j><k|.


@dataclass(frozen=True)
class Identity:
    d: int

    @property
    def dim_in(self) -> int:
        return self.d

    @property
    def dim_out(self) -> int:
        return self.d

    def act(self, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=np.complex128)


@dataclass(frozen=True)
class Transpose:
    d: int

    @property
    def dim_in(self) -> int:
        return self.d

    @property
    def dim_out(self) -> int:
        return self.d

    def act(self, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=np.complex128).T


@dataclass(frozen=True)
class Depolarize:
    """Constant map ``X -> Tr(X) * 1/dim_out``; input and output dims may differ."""

    dim_in: int
    dim_out: int

    def act(self, x: np.ndarray) -> np.ndarray:
        return np.trace(x) * np.eye(self.dim_out, dtype=np.complex128) / self.dim_out


@dataclass(frozen=True)
class Tensor:
    first: "MapSpec"
    second: "MapSpec"

    @property
    def dim_in(self) -> int:
        return self.first.dim_in * self.second.dim_in

    @property
    def dim_out(self) -> int:
        return self.first.dim_out * self.second.dim_out

    def act(self, x: np.ndarray) -> np.ndarray:
        da, db = self.first.dim_in, self.second.dim_in
        x = np.asarray(x, dtype=np.complex128).reshape(da, db, da, db)
        out = np.zeros((self.dim_out, self.dim_out), dtype=np.complex128)
        for i, k, j, l in zip(*np.nonzero(x)):
            ua = np.zeros((da, da), dtype=np.complex128)
            ub = np.zeros((db, db), dtype=np.complex128)
            ua[i, j] = 1.0
            ub[k, l] = 1.0
            out += x[i, k, j, l] * kron(self.first.act(ua), self.second.act(ub))
        return out


@dataclass(frozen=True)
class ConvexMix:
    w1: float
    first: "MapSpec"
    w2: float
    second: "MapSpec"

    def __post_init__(self):
        if self.w1 < 0 or self.w2 < 0:
            raise ValueError(f"mixture weights must be nonnegative, got {self.w1}, {self.w2}")
        if (self.first.dim_in, self.first.dim_out) != (self.second.dim_in, self.second.dim_out):
            raise DimensionError("mixed maps must share input and output dimensions")

    @property
    def dim_in(self) -> int:
        return self.first.dim_in

    @property
    def dim_out(self) -> int:
        return self.first.dim_out

    def act(self, x: np.ndarray) -> np.ndarray:
        return self.w1 * self.first.act(x) + self.w2 * self.second.act(x)


MapSpec = Union[Identity, Transpose, Depolarize, Tensor, ConvexMix]


def choi_of_map(spec: MapSpec) -> ChoiOperator:
    if isinstance(spec, ConvexMix):
        c = choi_of_map(spec.first).scaled(spec.w1) + choi_of_map(spec.second).scaled(spec.w2)
        return c
    din, dout = spec.dim_in, spec.dim_out
    c = np.zeros((din * dout, din * dout), dtype=np.complex128)
    for j in range(din):
        for k in range(din):
            unit = np.zeros((din, din), dtype=np.complex128)
            unit[j, k] = 1.0
            c[j * dout:(j + 1) * dout, k * dout:(k + 1) * dout] = spec.act(unit)
    return ChoiOperator(c, din, dout)


def apply(c: ChoiOperator, rho) -> np.ndarray:
    """Image of ``rho`` under the map: ``Tr_H[C (rho^T (x) 1_K)]``."""
    rho = as_matrix(rho)
    if rho.shape[0] != c.dim_in:
        raise DimensionError(f"map expects input dim {c.dim_in}, got {rho.shape[0]}")
    prod = c.matrix @ kron(rho.T, np.eye(c.dim_out))
    return partial_trace(prod, c.dims, over=0)


class TraceCheck(NamedTuple):
    is_trace_preserving: bool
    defect: np.ndarray

    def __bool__(self) -> bool:
        return self.is_trace_preserving


def is_trace_preserving(c: ChoiOperator, tol: float = TP_TOL) -> TraceCheck:
    defect = partial_trace(c.matrix, c.dims, over=1) - np.eye(c.dim_in)
    return TraceCheck(float(np.max(np.abs(defect))) <= tol, defect)


def is_cp(c: ChoiOperator, tol: float = PSD_TOL) -> bool:
    return bool(is_psd(c.matrix, tol))


def tensor_maps(c1: ChoiOperator, c2: ChoiOperator) -> ChoiOperator:
    """Choi of ``E1 (x) E2`` reordered to ``(in1 in2) (x) (out1 out2)``."""
    a1, b1 = c1.dims
    a2, b2 = c2.dims
    t = kron(c1.matrix, c2.matrix).reshape(a1, b1, a2, b2, a1, b1, a2, b2)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = a1 * b1 * a2 * b2
    return ChoiOperator(np.ascontiguousarray(t).reshape(n, n), a1 * a2, b1 * b2)
