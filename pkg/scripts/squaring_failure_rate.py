"""Heralded success of the squaring SPA on rho (x) rho versus (1 + Tr rho^2)/2."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from spakit.linalg import kron
from spakit.povm import complete_model, heralding_model
from spakit.sampling import sample_outcomes
from spakit.spa import spa_rho_square, success_probability
from spakit.states import random_density_matrix


@dataclass
class FailureConfig:
    states: int = 10
    samples: int = 1_000_000
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=FailureConfig.states)
    ap.add_argument("--samples", type=int, default=FailureConfig.samples)
    ap.add_argument("--seed", type=int, default=FailureConfig.seed)
    a = ap.parse_args()
    cfg = FailureConfig(a.states, a.samples, a.seed)

    model = complete_model(heralding_model(spa_rho_square().choi))
    rng = np.random.default_rng(cfg.seed)
    qubits = [np.eye(2) / 2] + [random_density_matrix(rng, 2) for _ in range(cfg.states - 1)]
    print(f"{'purity':>8} {'predicted':>10} {'observed':>10} {'z':>7}")
    for i, rho in enumerate(qubits):
        expected = success_probability(rho)
        hist = sample_outcomes(model, kron(rho, rho), cfg.samples, cfg.seed + i)
        observed = 1 - hist.failures / cfg.samples
        z = (observed - expected) / np.sqrt(expected * (1 - expected) / cfg.samples)
        purity = float(np.trace(rho @ rho).real)
        print(f"{purity:8.4f} {expected:10.6f} {observed:10.6f} {z:7.2f}")


if __name__ == "__main__":
    main()
