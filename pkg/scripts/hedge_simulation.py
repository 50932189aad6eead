"""Empirical normalized coordinates for every side/hedge pair against the closed form."""
import argparse
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from ctxlogic.reasoner import KnowledgeBase
from ctxlogic.scales import assert_scale, normalized

PAIRS = [("below", "very"), ("below", "none"), ("below", "somewhat"), ("above", "somewhat"), ("above", "none"), ("above", "very")]


@dataclass
class Config:
    kappa: int = 16384
    seeds: int = 100


def closed_form(side: str, hedge: str) -> Fraction:
    # enumerate the 16 equally likely rows of (a, s, r1, r2)
    kept = on = 0
    for a, s, r1, r2 in product((0, 1), repeat=4):
        r = r1 if hedge == "none" else ((r1 | r2) if (hedge == "very") == (side == "above") else (r1 & r2))
        removed = (r and s and not a) if side == "above" else (a and s and not r)
        if s and not removed:
            kept += 1
            on += a
    return Fraction(on, kept)


def run(cfg: Config) -> None:
    vals = np.zeros((cfg.seeds, len(PAIRS)))
    for seed in range(cfg.seeds):
        for k, (side, hedge) in enumerate(PAIRS):
            kb = KnowledgeBase(kappa=cfg.kappa, seed=seed)
            assert_scale(kb, "a", "s", side, hedge)
            vals[seed, k] = float(normalized(kb, "s", "a"))
    print(f"kappa={cfg.kappa} seeds={cfg.seeds}")
    print(f"{'side':6} {'hedge':9} {'expected':>9} {'mean':>8} {'sd':>7}")
    for k, (side, hedge) in enumerate(PAIRS):
        exp = closed_form(side, hedge)
        print(f"{side:6} {hedge:9} {str(exp):>9} {vals[:, k].mean():8.4f} {vals[:, k].std():7.4f}")
    ordered = int(np.all(np.diff(vals, axis=1) > 0, axis=1).sum())
    print(f"strictly ordered in {ordered}/{cfg.seeds} seeds")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--kappa", type=int, default=Config.kappa)
    p.add_argument("--seeds", type=int, default=Config.seeds)
    run(Config(**vars(p.parse_args())))
