"""Quick miss estimate 2^n/kappa next to the exact expectation and a simulation."""
import argparse
from dataclasses import dataclass

import numpy as np

from ctxlogic.reasoner import KnowledgeBase, expected_missed_exact, miss_probability_estimate


@dataclass
class Config:
    kappa: int = 10000
    n_min: int = 1
    n_max: int = 14
    trials: int = 200


def simulate(n: int, kappa: int, trials: int) -> float:
    missed = []
    for seed in range(trials):
        kb = KnowledgeBase(kappa=kappa, seed=seed)
        rows = sum(kb.symbol(f"s{k}").to_bools().astype(np.int64) << k for k in range(n))
        missed.append((1 << n) - np.unique(rows).size)
    return float(np.mean(missed))


def run(cfg: Config) -> None:
    print(f"kappa={cfg.kappa} trials={cfg.trials}")
    print(f"{'n':>3} {'2^n/kappa':>10} {'exact E[missed]':>16} {'simulated':>10}")
    for n in range(cfg.n_min, cfg.n_max + 1):
        quick = float(miss_probability_estimate(n, cfg.kappa))
        exact = float(expected_missed_exact(n, cfg.kappa))
        print(f"{n:3d} {quick:10.4g} {exact:16.4g} {simulate(n, cfg.kappa, cfg.trials):10.4g}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    run(Config(**vars(p.parse_args())))
