"""Countermodel detection rate against violating fraction f, next to 1 - (1 - f)^kappa."""
import argparse
from dataclasses import dataclass

from ctxlogic.oracle import violating_fraction
from ctxlogic.reasoner import KnowledgeBase, entails


@dataclass
class Config:
    kappa: int = 16384
    trials: int = 1000
    max_width: int = 16


def run(cfg: Config) -> None:
    print(f"kappa={cfg.kappa} trials={cfg.trials}")
    print(f"{'f':>10} {'detected':>9} {'bound':>9}")
    for width in range(2, cfg.max_width + 1, 2):
        # a conjunction of width-1 symbols implying the last one fails on one row in 2^width
        names = [f"s{k}" for k in range(width)]
        query = f"[{' * '.join(names[:-1])} <= {names[-1]}]"
        f = violating_fraction([], query)
        hits = sum(not entails(KnowledgeBase(kappa=cfg.kappa, seed=s), query).entailed for s in range(cfg.trials))
        print(f"{str(f):>10} {hits / cfg.trials:9.4f} {1 - (1 - float(f)) ** cfg.kappa:9.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    run(Config(**vars(p.parse_args())))
