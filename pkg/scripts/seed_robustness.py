"""Verdict tallies of the sampled protocol over many seeds and sample sizes."""
from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass, field

from spakit.detect import verdict_sampled
from spakit.povm import build_ps_model
from spakit.states import werner_state


@dataclass
class RobustnessConfig:
    probabilities: list[float] = field(default_factory=lambda: [0.9, 0.5, 1 / 3, 0.2])
    sample_sizes: list[int] = field(default_factory=lambda: [10_000, 100_000])
    seeds: int = 100
    k_sigma: float = 3.0


def run(cfg: RobustnessConfig) -> dict[tuple[float, int], Counter]:
    model = build_ps_model()
    table = {}
    for p in cfg.probabilities:
        rho = werner_state(p)
        for n in cfg.sample_sizes:
            table[p, n] = Counter(
                verdict_sampled(rho, model, n, seed, cfg.k_sigma).verdict.value for seed in range(cfg.seeds)
            )
    return table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=RobustnessConfig.seeds)
    ap.add_argument("--k-sigma", type=float, default=RobustnessConfig.k_sigma)
    a = ap.parse_args()
    cfg = RobustnessConfig(seeds=a.seeds, k_sigma=a.k_sigma)
    for (p, n), counts in run(cfg).items():
        tally = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
        print(f"p={p:.4f} n={n:>7}: {tally}")


if __name__ == "__main__":
    main()
