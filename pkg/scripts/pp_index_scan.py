"""Scan the Pimsner–Popa ratio ‖T‖/‖E(T)‖ across fixtures and labels.

The sandwich bound is d_X²; the interesting question at desk scale is how
much of the bound random positive elements actually use.  Run:

    python3 scripts/pp_index_scan.py --samples 500 --seed 1
"""

import argparse
from dataclasses import dataclass

from utcat.algebra_object import pp_check
from utcat.annulus import build_annulus
from utcat.fixtures import fibonacci, ising, vec_zn


@dataclass
class ScanConfig:
    samples: int = 200
    seed: int = 0
    slack: float = 1e-8


FIXTURES = {
    "fib": fibonacci,
    "ising": ising,
    "vec_z3": lambda: vec_zn(3),
    "vec_z4": lambda: vec_zn(4),
}


def run(cfg: ScanConfig):
    print(f"{'fixture':<8} {'X':<6} {'d_X^2':>10} {'max ratio':>10} {'used':>6}")
    for name, builder in FIXTURES.items():
        cat = builder()
        ann = build_annulus(cat)
        for X in cat.ring.labels:
            rep = pp_check(ann, X, cfg.samples, seed=cfg.seed, slack=cfg.slack)
            used = rep["max_ratio"] / rep["bound"]
            print(f"{name:<8} {X:<6} {rep['bound']:>10.6f} "
                  f"{rep['max_ratio']:>10.6f} {used:>6.1%}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(ScanConfig(samples=args.samples, seed=args.seed))
