"""State constructors used by the protocol, scripts and tests."""
from __future__ import annotations

import numpy as np

from .linalg import kron, projector


def bell_state() -> np.ndarray:
    """``|Phi+><Phi+|`` with ``|Phi+> = (|00> + |11>)/sqrt(2)``."""
    m = np.zeros((4, 4), dtype=np.complex128)
    m[np.ix_([0, 3], [0, 3])] = 0.5
    return m


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128) / d


def werner_state(p: float) -> np.ndarray:
    """``p |Phi+><Phi+| + (1-p) 1/4``; entangled iff ``p > 1/3``."""
    return p * bell_state() + (1 - p) * maximally_mixed(4)


def werner_min_pt_eigenvalue(p: float) -> float:
    return (1 - 3 * p) / 4


def random_density_matrix(rng: np.random.Generator, d: int) -> np.ndarray:
    """``G^2 / Tr G^2`` with ``G = A + A^dag`` and entries of ``A`` uniform in the unit square."""
    a = rng.random((d, d)) + 1j * rng.random((d, d))
    g = a + a.conj().T
    g2 = g @ g
    return g2 / np.trace(g2).real


def random_pure_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return projector(v / np.linalg.norm(v))


def random_product_state(rng: np.random.Generator, da: int = 2, db: int = 2) -> np.ndarray:
    return kron(random_density_matrix(rng, da), random_density_matrix(rng, db))
