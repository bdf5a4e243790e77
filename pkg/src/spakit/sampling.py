"""Seeded Monte Carlo sampling of measurement outcomes.

Samples are drawn in fixed-size blocks. Block ``b`` of a run seeded with
``s`` always uses the Philox stream keyed by ``(s, b)``, so the histogram
does not depend on how blocks are grouped across workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import check_density_matrix
from .povm import MeasurementModel, outcome_probabilities

BLOCK_SIZE = 1 << 16
FAILURE_INDEX = -1


@dataclass(frozen=True)
class Histogram:
    """Outcome counts per POVM index; failures are kept apart under ``FAILURE_INDEX``."""

    counts: np.ndarray
    failures: int
    seed: int

    @property
    def n(self) -> int:
        return int(self.counts.sum()) + self.failures

    @property
    def frequencies(self) -> np.ndarray:
        n = self.n
        return self.counts / n if n else np.zeros(len(self.counts))

    def as_dict(self) -> dict[int, int]:
        """Nonzero counts keyed by outcome index."""
        out = {int(i): int(c) for i, c in enumerate(self.counts) if c}
        if self.failures:
            out[FAILURE_INDEX] = int(self.failures)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.failures == other.failures
            and np.array_equal(self.counts, other.counts)
        )


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def category_cdf(probabilities) -> np.ndarray:
    """Cumulative distribution over outcomes; mass above the last entry is failure."""
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    cdf = np.cumsum(p)
    if len(cdf) and cdf[-1] > 1.0:
        cdf = cdf / cdf[-1]
    return cdf


def _count_block(cdf: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    u = block_generator(seed, block).random(size)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=len(cdf) + 1)


def sample_categorical(
    probabilities, n: int, seed: int, workers: int = 1, block_size: int = BLOCK_SIZE
) -> Histogram:
    """Inverse-CDF sampling of ``n`` draws; probabilities below zero are clamped."""
    if n < 0:
        raise ValueError(f"sample count must be nonnegative, got {n}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    cdf = category_cdf(probabilities)
    k = len(cdf)
    n_blocks = -(-n // block_size)
    sizes = [min(block_size, n - b * block_size) for b in range(n_blocks)]
    total = np.zeros(k + 1, dtype=np.int64)
    if workers <= 1 or n_blocks <= 1:
        for b, size in enumerate(sizes):
            total += _count_block(cdf, seed, b, size)
    else:
        groups = np.array_split(np.arange(n_blocks), workers)

        def run(blocks) -> np.ndarray:
            acc = np.zeros(k + 1, dtype=np.int64)
            for b in blocks:
                acc += _count_block(cdf, seed, int(b), sizes[b])
            return acc

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(run, groups):
                total += part
    return Histogram(counts=total[:k], failures=int(total[k]), seed=seed)


def sample_outcomes(
    model: MeasurementModel, rho, n: int, seed: int, workers: int = 1, block_size: int = BLOCK_SIZE
) -> Histogram:
    """Simulate ``n`` runs of ``model`` on ``rho``.

    Outcome ``j`` occurs with probability ``Tr[rho Pi_j]``; whatever
    probability the elements leave over (the failure element, if any) is
    recorded as failures.
    """
    check_density_matrix(rho)
    p, _ = outcome_probabilities(model, rho)
    return sample_categorical(p, n, seed, workers=workers, block_size=block_size)
