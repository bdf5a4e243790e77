"""Exact and sampled verdicts along the Werner family p |Phi+><Phi+| + (1-p) 1/4."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from spakit.detect import verdict_exact, verdict_sampled
from spakit.povm import build_ps_model
from spakit.states import werner_min_pt_eigenvalue, werner_state


@dataclass
class SweepConfig:
    points: int = 21
    samples: int = 100_000
    seed: int = 0
    k_sigma: float = 3.0
    workers: int = 1


def run(cfg: SweepConfig) -> list[dict]:
    model = build_ps_model()
    rows = []
    for p in np.linspace(0.0, 1.0, cfg.points):
        rho = werner_state(p)
        exact = verdict_exact(rho)
        sampled = verdict_sampled(rho, model, cfg.samples, cfg.seed, cfg.k_sigma, cfg.workers)
        rows.append({
            "p": float(p),
            "true_min": werner_min_pt_eigenvalue(p),
            "exact_min": exact.min_pt_eigenvalue,
            "exact": exact.verdict.value,
            "sampled_min": sampled.min_pt_eigenvalue,
            "margin": sampled.margin,
            "sampled": sampled.verdict.value,
        })
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=SweepConfig.points)
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--k-sigma", type=float, default=SweepConfig.k_sigma)
    ap.add_argument("--workers", type=int, default=SweepConfig.workers)
    a = ap.parse_args()
    cfg = SweepConfig(a.points, a.samples, a.seed, a.k_sigma, a.workers)
    print(f"{'p':>6} {'true':>9} {'exact':>9} {'verdict':>14} {'sampled':>9} {'margin':>8} {'verdict':>14}")
    for r in run(cfg):
        print(f"{r['p']:6.3f} {r['true_min']:9.5f} {r['exact_min']:9.5f} {r['exact']:>14} "
              f"{r['sampled_min']:9.5f} {r['margin']:8.5f} {r['sampled']:>14}")


if __name__ == "__main__":
    main()
